#include "ddtopt/feedback.hpp"

#include <limits>

namespace ddtopt {

TorqueCommand u_fb(const ReducedState& q, const DerivedRates& rates, const RobotParams& params,
                   SynthesisFlavor flavor, const Tolerance& tol) {
    PhasePlan plan;
    try {
        plan = plan_optimal(q, rates, tol, flavor);
    } catch (const AmbiguousRegion&) {
        // Stay total: shrink the bands until the strict signs decide.
        Tolerance strict;
        strict.eps_surface = std::numeric_limits<double>::denorm_min();
        plan = plan_optimal(q, rates, strict, flavor);
    }
    if (plan.empty()) return {0.0, 0.0};
    const auto [u1, u2] = phase_torques(plan.phases.front().first, params);
    return {u1, u2};
}

}  // namespace ddtopt
