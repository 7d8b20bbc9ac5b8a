#pragma once

#include <utility>

#include "ddtopt/model.hpp"

namespace ddtopt {

struct WheelCommand {
    double phi_dot_R = 0.0;
    double phi_dot_L = 0.0;
};

struct VelocityCommand {
    double v = 0.0;
    double omega = 0.0;
};

struct HeadingRef {
    double theta_d = 0.0;   // desired heading
    double v_d_mag = 0.0;   // desired speed magnitude, >= 0
};

enum class HybridMode { BangBang, Continuous };

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

// v = |v_d| cos(theta - theta_d) (optionally with |v_d| clamped to v_max),
// omega = -k_omega (theta - theta_d). Heading error is wrapped.
VelocityCommand continuous_cmd(double theta, const HeadingRef& ref, double k_omega,
                               bool saturate_speed, const DerivedRates& rates);

// Exact inverse of the wheel kinematics: phi_R = (v + b*omega)/r,
// phi_L = (v - b*omega)/r.
WheelCommand wheels_from_vw(const VelocityCommand& cmd, const RobotParams& params);

// Component-wise clamp to +-phi_dot_max.
WheelCommand saturate_wheels(const WheelCommand& w, const RobotParams& params);

// v = r(phi_R + phi_L)/2, omega = r(phi_R - phi_L)/(2b).
VelocityCommand vw_from_wheels(const WheelCommand& w, const RobotParams& params);

// Projection onto the feasible diamond that always preserves the rotational
// command: omega is clamped to +-omega_max, and when the raw pair is outside
// the diamond the forward speed shrinks to whatever rotation leaves over.
VelocityCommand prioritized_cmd(double v, double omega_d, const RobotParams& params,
                                const DerivedRates& rates);

// Rotate in place at +-omega_max toward theta_d; zero at theta = theta_d.
VelocityCommand bang_bang_heading(double theta, double theta_d, const DerivedRates& rates);

// Bang-bang rotation until the wrapped heading error falls below theta_tol,
// then latch into the prioritized continuous law. The latch is one-way.
std::pair<VelocityCommand, HybridMode> hybrid_cmd(double theta, const HeadingRef& ref,
                                                  HybridMode mode, double k_omega,
                                                  const RobotParams& params,
                                                  const DerivedRates& rates, double theta_tol);

}  // namespace ddtopt
