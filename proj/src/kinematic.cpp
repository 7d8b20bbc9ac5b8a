#include "ddtopt/kinematic.hpp"

#include <algorithm>
#include <cmath>

namespace ddtopt {

double wrap_angle(double a) {
    double w = std::fmod(a + M_PI, 2.0 * M_PI);
    if (w <= 0.0) w += 2.0 * M_PI;
    return w - M_PI;
}

VelocityCommand continuous_cmd(double theta, const HeadingRef& ref, double k_omega,
                               bool saturate_speed, const DerivedRates& rates) {
    if (!(k_omega > 0.0)) throw std::invalid_argument("k_omega must be > 0");
    const double err = wrap_angle(theta - ref.theta_d);
    const double mag = saturate_speed ? std::min(ref.v_d_mag, rates.v_max) : ref.v_d_mag;
    return {mag * std::cos(err), -k_omega * err};
}

WheelCommand wheels_from_vw(const VelocityCommand& cmd, const RobotParams& params) {
    return {(cmd.v + params.b * cmd.omega) / params.r,
            (cmd.v - params.b * cmd.omega) / params.r};
}

WheelCommand saturate_wheels(const WheelCommand& w, const RobotParams& params) {
    const double lim = params.phi_dot_max;
    return {std::clamp(w.phi_dot_R, -lim, lim), std::clamp(w.phi_dot_L, -lim, lim)};
}

VelocityCommand vw_from_wheels(const WheelCommand& w, const RobotParams& params) {
    return {params.r * (w.phi_dot_R + w.phi_dot_L) / 2.0,
            params.r * (w.phi_dot_R - w.phi_dot_L) / (2.0 * params.b)};
}

VelocityCommand prioritized_cmd(double v, double omega_d, const RobotParams& params,
                                const DerivedRates& rates) {
    const double omega_bar = std::clamp(omega_d, -rates.omega_max, rates.omega_max);
    double v_bar = v;
    if (std::abs(v) / params.r + params.b * std::abs(omega_d) / params.r > params.phi_dot_max) {
        const double room = std::max(0.0, rates.v_max - params.b * std::abs(omega_d));
        v_bar = (v > 0.0 ? room : (v < 0.0 ? -room : 0.0));
    }
    return {v_bar, omega_bar};
}

VelocityCommand bang_bang_heading(double theta, double theta_d, const DerivedRates& rates) {
    const double err = wrap_angle(theta_d - theta);
    if (err == 0.0) return {0.0, 0.0};
    return {0.0, err > 0.0 ? rates.omega_max : -rates.omega_max};
}

std::pair<VelocityCommand, HybridMode> hybrid_cmd(double theta, const HeadingRef& ref,
                                                  HybridMode mode, double k_omega,
                                                  const RobotParams& params,
                                                  const DerivedRates& rates, double theta_tol) {
    if (mode == HybridMode::BangBang) {
        if (std::abs(wrap_angle(theta - ref.theta_d)) <= theta_tol)
            mode = HybridMode::Continuous;
        else
            return {bang_bang_heading(theta, ref.theta_d, rates), HybridMode::BangBang};
    }
    const VelocityCommand c = continuous_cmd(theta, ref, k_omega, true, rates);
    return {prioritized_cmd(c.v, c.omega, params, rates), HybridMode::Continuous};
}

}  // namespace ddtopt
