#pragma once

#include <stdexcept>

#include "ddtopt/model.hpp"

namespace ddtopt {

struct OracleSpec {
    double t_upper = 0.0;      // search horizon per phase; <= 0 selects the default bound
    int n_grid = 60;           // grid points per duration axis
    double target_tol = 1e-3;  // acceptance ball radius in the weighted norm
    ReducedState target{0.0, 0.0, 0.0};
    int refine_rounds = 3;     // local refinement rounds, window shrinks 10x each
    bool polish = true;        // Newton-polish the incumbent to an exact hit
    int threads = 0;           // 0 selects hardware concurrency
};

struct OracleResult {
    double time = 0.0;
    PhasePlan plan;
    double final_grid_step = 0.0;  // per-axis spacing of the last grid round
    double endpoint_error = 0.0;   // weighted distance of the plan endpoint to target
    bool polished = false;
};

class UnreachableWithinHorizon : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Generous reachability bound
// 2(|dv|/beta + max(|omega|, |domega|)/alpha + 2 sqrt(|dtheta|/alpha) + 1).
double default_t_upper(const ReducedState& q0, const ReducedState& target,
                       const DerivedRates& rates);

// Exhaustive sweep over all three-phase sequences with distinct consecutive
// phases (36 of them; one- and two-phase plans arise from zero durations),
// gridding the durations and propagating exactly. Wholly independent of the
// closed-form planners. Throws UnreachableWithinHorizon when no grid point
// lands in the target ball.
OracleResult brute_force_min_time(const ReducedState& q0, const OracleSpec& spec,
                                  const DerivedRates& rates);

// True iff the plan has no negative duration and exact propagation from q0
// ends within tol (weighted norm) of target.
bool verify_plan(const ReducedState& q0, const PhasePlan& plan, const ReducedState& target,
                 double tol, const DerivedRates& rates);

}  // namespace ddtopt
