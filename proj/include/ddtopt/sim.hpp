#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ddtopt/feedback.hpp"
#include "ddtopt/kinematic.hpp"
#include "ddtopt/model.hpp"
#include "ddtopt/synthesis.hpp"

namespace ddtopt {

// Planar pose with body velocities; evolves by x' = v cos(theta),
// y' = v sin(theta), theta' = omega.
struct PoseState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double v = 0.0;
    double omega = 0.0;
};

struct Event {
    double t = 0.0;
    std::string what;
};

struct TorqueSample {
    double t = 0.0;
    ReducedState q;
    double u1 = 0.0, u2 = 0.0;  // control applied from this sample on
};

struct TorqueTrajectory {
    std::vector<TorqueSample> samples;
    std::vector<Event> events;
    bool converged = true;
    // 1 or 2 when the trajectory left Omega4 through H1 = 0 or H2 = 0.
    std::optional<int> omega4_exit_surface;

    double end_time() const { return samples.empty() ? 0.0 : samples.back().t; }
};

struct KinematicSample {
    double t = 0.0;
    PoseState pose;             // v, omega are the realized body velocities
    double phi_R = 0.0, phi_L = 0.0;  // saturated wheel speeds
};

struct KinematicTrajectory {
    std::vector<KinematicSample> samples;
    std::vector<Event> events;
};

// Exact stepping through a phase plan; samples on the sample_dt grid plus
// every phase boundary and the exact final time.
TorqueTrajectory simulate_open_loop(const ReducedState& q0, const PhasePlan& plan,
                                    double sample_dt, const DerivedRates& rates,
                                    const RobotParams& params);

struct FeedbackSimOptions {
    double dt = 1e-4;
    double t_max = 60.0;
    double chatter_eps = 1e-7;          // hysteresis band in H units
    double termination_radius = 1e-6;   // weighted norm ball around the origin
    bool refine_events = true;          // bisect switching-surface crossings
};

// Fixed-step closed loop under the state feedback law, with surface-crossing
// bisection and a hold band that keeps surface rides from chattering.
TorqueTrajectory simulate_feedback(const ReducedState& q0, SynthesisFlavor flavor,
                                   const DerivedRates& rates, const RobotParams& params,
                                   const FeedbackSimOptions& options = {},
                                   const Tolerance& tol = {});

// Sup over the closed-loop samples of the max component deviation from the
// exact open-loop plan state at the same instant.
double open_closed_loop_gap(const TorqueTrajectory& fb, const ReducedState& q0,
                            const PhasePlan& plan, const DerivedRates& rates);

// Piecewise-constant sampled velocity reference (t, vdx, vdy).
struct RefSignal {
    std::vector<std::array<double, 3>> samples;  // sorted by t

    std::array<double, 2> velocity_at(double t) const;
    HeadingRef heading_at(double t) const;
};

enum class KinematicController { Continuous, Saturated, Modified, Hybrid };

const char* kinematic_controller_name(KinematicController c);
std::optional<KinematicController> kinematic_controller_from_name(const std::string& name);

struct KinematicSimOptions {
    double dt = 1e-3;
    double t_max = 60.0;
    double k_omega = 1.0;
    double theta_tol = 1e-3;  // hybrid latch threshold
};

// Controller -> wheel commands -> saturation -> realized velocities ->
// classical RK4 pose update per step.
KinematicTrajectory simulate_kinematic(const PoseState& pose0, KinematicController controller,
                                       const RefSignal& ref, const RobotParams& params,
                                       const DerivedRates& rates,
                                       const KinematicSimOptions& options = {});

// The pose integrator itself: n fixed RK4 steps under a constant twist.
PoseState integrate_constant_twist(PoseState pose, double v, double omega, double dt, long steps);

// Mean wrapped |theta - theta_d(t)| over samples with t in [t0, t1].
double mean_heading_error(const KinematicTrajectory& traj, const RefSignal& ref, double t0,
                          double t1);

}  // namespace ddtopt
