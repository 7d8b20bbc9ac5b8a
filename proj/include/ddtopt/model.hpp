#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ddtopt {

// Physical parameters of the differential drive robot. Units: meters,
// kilograms, seconds, radians, newton-meters.
struct RobotParams {
    double r = 1.0;            // wheel radius
    double b = 5.0;            // half wheel-base
    double m = 3.0;            // effective mass
    double J_r = 1.2;          // effective rotational inertia about the vertical axis
    double u_m = 1.0;          // torque bound per motor
    double phi_dot_max = 0.5;  // wheel speed bound
    double c1 = 1.0;           // wheel-speed dynamics coefficients
    double c2 = 0.1;
    std::optional<double> alpha_override;
    std::optional<double> beta_override;

    // Throws std::invalid_argument on violated invariants.
    void validate() const;
};

// Saturated-torque acceleration rates and kinematic speed bounds.
struct DerivedRates {
    double alpha = 1.0;      // angular acceleration under opposite torques
    double beta = 1.0;       // linear acceleration under equal torques
    double v_max = 0.5;      // r * phi_dot_max
    double omega_max = 0.1;  // (r/b) * phi_dot_max
};

DerivedRates derive_rates(const RobotParams& params);

// Synthesis state relative to the goal: forward speed error, heading error
// (unwrapped, lives on the real line), angular velocity.
struct ReducedState {
    double v = 0.0;
    double theta = 0.0;
    double omega = 0.0;
};

// The four saturated torque modes. Beta modes drive both motors with the
// same sign and change only v; alpha modes drive them with opposite signs
// and change only omega.
enum class TorquePhase { BetaPlus, BetaMinus, AlphaPlus, AlphaMinus };

bool is_alpha(TorquePhase p);
int phase_sign(TorquePhase p);  // +1 for *Plus, -1 for *Minus
TorquePhase alpha_phase(int sign);
TorquePhase beta_phase(int sign);
TorquePhase opposite(TorquePhase p);
const char* phase_name(TorquePhase p);
std::optional<TorquePhase> phase_from_name(const std::string& name);

// Signed motor torque pair (u1, u2) realizing a phase.
std::pair<double, double> phase_torques(TorquePhase phase, const RobotParams& params);

// Exact closed-form propagation of the reduced state through one phase held
// for dt seconds.
ReducedState step_phase(const ReducedState& q, TorquePhase phase, double dt,
                        const DerivedRates& rates);

enum class PlanKind { Empty, C1ns, C2a, C2b, Boundary };

const char* plan_kind_name(PlanKind k);

// An ordered sequence of (phase, duration) pairs; the representation of an
// extremal control.
struct PhasePlan {
    std::vector<std::pair<TorquePhase, double>> phases;
    PlanKind kind = PlanKind::Empty;

    double total_time() const;
    bool empty() const { return phases.empty(); }
};

// Clamps tiny negative durations to zero, drops vanished phases and merges
// equal neighbors. Durations below -1e-9 are a logic error and throw.
PhasePlan normalized(PhasePlan plan);

// Structural kind of a phase sequence, for plans loaded from files.
PlanKind infer_plan_kind(const PhasePlan& plan);

ReducedState propagate(ReducedState q, const PhasePlan& plan, const DerivedRates& rates);

// State along the plan at time t (clamped to [0, total_time]).
ReducedState plan_state_at(const ReducedState& q0, const PhasePlan& plan, double t,
                           const DerivedRates& rates);

// Phase active at time t; nullopt for an empty plan or t past the end.
std::optional<TorquePhase> plan_phase_at(const PhasePlan& plan, double t);

// max(|v|/beta, |theta|, |omega|/alpha); the norm used for termination balls
// and oracle target acceptance.
double weighted_norm(const ReducedState& q, const DerivedRates& rates);

double weighted_distance(const ReducedState& a, const ReducedState& b,
                         const DerivedRates& rates);

}  // namespace ddtopt
