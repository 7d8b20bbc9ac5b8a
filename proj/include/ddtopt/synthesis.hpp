#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ddtopt/model.hpp"
#include "ddtopt/regions.hpp"

namespace ddtopt {

// The two optimal syntheses differ only on Omega4: Gamma1 covers it with the
// beta-alpha-beta realization (exits through H1 = 0), Gamma2 with the
// alpha-beta-alpha realization (exits through H2 = 0).
enum class SynthesisFlavor { Gamma1, Gamma2 };

// Extremal for an initial state with zero angular velocity: alpha, beta,
// alpha with the outer durations equal. Degenerate inputs drop phases.
PhasePlan plan_w0_zero(double v0, double theta0, const DerivedRates& rates);

// Opposite-torque first phase, two switches: alpha(s1), beta(s2), alpha(-s1).
// Exists on Omega1 (s1 = +1) and Omega2 (s1 = -1).
std::optional<PhasePlan> plan_c2a(const ReducedState& q, const DerivedRates& rates);

// Same-torque first phase, two switches: beta(s3), alpha(s4), beta(-s3).
// Exists where omega*H1 < 0. When both s3 signs are admissible the faster
// s3 = -sign(v) branch is returned.
std::optional<PhasePlan> plan_c2b(const ReducedState& q, const DerivedRates& rates);

// One motor constant: beta(s3), alpha(s4), beta(s3). Exists on Omega4.
std::optional<PhasePlan> plan_c1ns_bab(const ReducedState& q, const DerivedRates& rates);

// One motor constant: alpha(s1), beta(s2), alpha(s1). Exists on Omega4 with
// v != 0 (the switching-time formula divides by |v|).
std::optional<PhasePlan> plan_c1ns_aba(const ReducedState& q, const DerivedRates& rates);

// One- or two-phase plans for the boundary sets S5, S6, Lv, Lomega.
std::optional<PhasePlan> plan_boundary(const ReducedState& q, const DerivedRates& rates,
                                       const RegionLabel& label);

class SynthesisError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Region dispatch: Omega1/Omega2 -> C2a, Omega4 -> C1ns (variant by flavor),
// boundaries -> their plans, Origin -> empty. Throws SynthesisError when the
// dispatched planner rejects its own region (tolerance misclassification).
PhasePlan plan_optimal(const ReducedState& q, const DerivedRates& rates,
                       const Tolerance& tol = {},
                       SynthesisFlavor flavor = SynthesisFlavor::Gamma1);

// Closed-form totals used by the family-ordering comparisons. t_c2b_literal
// is the sign(v) branch -2*theta/omega + |v|/beta; t_c2b_planner is the
// faster branch the planner actually emits.
struct DurationFormulas {
    std::optional<double> t_c2a;
    std::optional<double> t_c2b_literal;
    std::optional<double> t_c2b_planner;
    std::optional<double> t_c1ns;
};

DurationFormulas duration_formulas(const ReducedState& q, const DerivedRates& rates);

// One row of the nine-candidate enumeration for a nonzero target angular
// velocity. Infeasible rows keep their raw durations for diagnosis.
struct TargetCandidate {
    std::string family;               // "aba-quad(s1,root)", "aba-lin", "bab(s4,s6)"
    std::array<double, 3> durations;  // raw t1, t2, t3 before clamping
    bool feasible = false;
    PhasePlan plan;        // normalized; valid only when feasible
    double total_time = 0.0;
};

struct CandidateSet {
    std::vector<TargetCandidate> table;   // all nine rows
    std::vector<std::size_t> feasible;    // indices into table
    std::vector<std::size_t> best;        // feasible indices attaining the minimum
    double best_time = 0.0;

    const TargetCandidate& best_candidate() const { return table.at(best.at(0)); }
};

// Appendix synthesis: drive (v, theta) to zero and omega to omega_d by one of
// nine three-phase sign structures; survivors are verified by exact
// propagation. Throws SynthesisError if no candidate is feasible.
CandidateSet plan_nonzero_target(const ReducedState& q0, double omega_d,
                                 const DerivedRates& rates, double tie_tol_rel = 1e-9);

}  // namespace ddtopt
