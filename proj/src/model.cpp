#include "ddtopt/model.hpp"

#include <algorithm>
#include <cmath>

namespace ddtopt {

void RobotParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("invalid robot params: ") + what);
    };
    require(std::isfinite(r) && r > 0.0, "r must be > 0");
    require(std::isfinite(b) && b > 0.0, "b must be > 0");
    require(std::isfinite(m) && m > 0.0, "m must be > 0");
    require(std::isfinite(J_r) && J_r > 0.0, "J_r must be > 0");
    require(std::isfinite(u_m) && u_m > 0.0, "u_m must be > 0");
    require(std::isfinite(phi_dot_max) && phi_dot_max > 0.0, "phi_dot_max must be > 0");
    require(std::isfinite(c1) && c1 > 0.0, "c1 must be > 0");
    require(std::isfinite(c2) && c2 >= 0.0, "c2 must be >= 0");
    require(c1 != c2, "c1 and c2 cannot be equal");
    if (alpha_override) require(std::isfinite(*alpha_override) && *alpha_override > 0.0, "alpha override must be > 0");
    if (beta_override) require(std::isfinite(*beta_override) && *beta_override > 0.0, "beta override must be > 0");
}

DerivedRates derive_rates(const RobotParams& params) {
    params.validate();
    DerivedRates rates;
    rates.alpha = params.alpha_override ? *params.alpha_override
                                        : 4.0 * params.r * params.u_m / (params.J_r * params.b);
    rates.beta = params.beta_override ? *params.beta_override
                                      : 2.0 * params.r * params.u_m / params.m;
    rates.v_max = params.r * params.phi_dot_max;
    rates.omega_max = params.r / params.b * params.phi_dot_max;
    return rates;
}

bool is_alpha(TorquePhase p) {
    return p == TorquePhase::AlphaPlus || p == TorquePhase::AlphaMinus;
}

int phase_sign(TorquePhase p) {
    return (p == TorquePhase::BetaPlus || p == TorquePhase::AlphaPlus) ? 1 : -1;
}

TorquePhase alpha_phase(int sign) {
    return sign >= 0 ? TorquePhase::AlphaPlus : TorquePhase::AlphaMinus;
}

TorquePhase beta_phase(int sign) {
    return sign >= 0 ? TorquePhase::BetaPlus : TorquePhase::BetaMinus;
}

TorquePhase opposite(TorquePhase p) {
    switch (p) {
        case TorquePhase::BetaPlus: return TorquePhase::BetaMinus;
        case TorquePhase::BetaMinus: return TorquePhase::BetaPlus;
        case TorquePhase::AlphaPlus: return TorquePhase::AlphaMinus;
        case TorquePhase::AlphaMinus: return TorquePhase::AlphaPlus;
    }
    throw std::logic_error("unreachable");
}

const char* phase_name(TorquePhase p) {
    switch (p) {
        case TorquePhase::BetaPlus: return "beta+";
        case TorquePhase::BetaMinus: return "beta-";
        case TorquePhase::AlphaPlus: return "alpha+";
        case TorquePhase::AlphaMinus: return "alpha-";
    }
    throw std::logic_error("unreachable");
}

std::optional<TorquePhase> phase_from_name(const std::string& name) {
    if (name == "beta+") return TorquePhase::BetaPlus;
    if (name == "beta-") return TorquePhase::BetaMinus;
    if (name == "alpha+") return TorquePhase::AlphaPlus;
    if (name == "alpha-") return TorquePhase::AlphaMinus;
    return std::nullopt;
}

std::pair<double, double> phase_torques(TorquePhase phase, const RobotParams& params) {
    const double u = params.u_m;
    switch (phase) {
        case TorquePhase::BetaPlus: return {u, u};
        case TorquePhase::BetaMinus: return {-u, -u};
        case TorquePhase::AlphaPlus: return {u, -u};
        case TorquePhase::AlphaMinus: return {-u, u};
    }
    throw std::logic_error("unreachable");
}

ReducedState step_phase(const ReducedState& q, TorquePhase phase, double dt,
                        const DerivedRates& rates) {
    ReducedState out = q;
    const double s = phase_sign(phase);
    if (is_alpha(phase)) {
        out.theta = q.theta + q.omega * dt + 0.5 * s * rates.alpha * dt * dt;
        out.omega = q.omega + s * rates.alpha * dt;
    } else {
        out.v = q.v + s * rates.beta * dt;
        out.theta = q.theta + q.omega * dt;
    }
    return out;
}

const char* plan_kind_name(PlanKind k) {
    switch (k) {
        case PlanKind::Empty: return "empty";
        case PlanKind::C1ns: return "C1ns";
        case PlanKind::C2a: return "C2a";
        case PlanKind::C2b: return "C2b";
        case PlanKind::Boundary: return "boundary";
    }
    throw std::logic_error("unreachable");
}

double PhasePlan::total_time() const {
    double t = 0.0;
    for (const auto& [phase, dur] : phases) t += dur;
    return t;
}

PhasePlan normalized(PhasePlan plan) {
    constexpr double kNegSlack = 1e-9;
    constexpr double kDropBelow = 1e-15;
    std::vector<std::pair<TorquePhase, double>> out;
    for (auto& [phase, dur] : plan.phases) {
        if (dur < -kNegSlack)
            throw std::logic_error("phase plan with negative duration " + std::to_string(dur));
        const double d = std::max(dur, 0.0);
        if (d < kDropBelow) continue;
        if (!out.empty() && out.back().first == phase)
            out.back().second += d;
        else
            out.emplace_back(phase, d);
    }
    plan.phases = std::move(out);
    if (plan.phases.empty()) plan.kind = PlanKind::Empty;
    return plan;
}

PlanKind infer_plan_kind(const PhasePlan& plan) {
    if (plan.phases.empty()) return PlanKind::Empty;
    if (plan.phases.size() == 1) return PlanKind::Boundary;
    const TorquePhase first = plan.phases.front().first;
    const TorquePhase last = plan.phases.back().first;
    if (is_alpha(first) != is_alpha(last)) return PlanKind::Boundary;
    if (first == last) return PlanKind::C1ns;
    return is_alpha(first) ? PlanKind::C2a : PlanKind::C2b;
}

ReducedState propagate(ReducedState q, const PhasePlan& plan, const DerivedRates& rates) {
    for (const auto& [phase, dur] : plan.phases) q = step_phase(q, phase, dur, rates);
    return q;
}

ReducedState plan_state_at(const ReducedState& q0, const PhasePlan& plan, double t,
                           const DerivedRates& rates) {
    ReducedState q = q0;
    double remaining = std::max(t, 0.0);
    for (const auto& [phase, dur] : plan.phases) {
        if (remaining <= dur) return step_phase(q, phase, remaining, rates);
        q = step_phase(q, phase, dur, rates);
        remaining -= dur;
    }
    return q;
}

std::optional<TorquePhase> plan_phase_at(const PhasePlan& plan, double t) {
    double acc = 0.0;
    for (const auto& [phase, dur] : plan.phases) {
        acc += dur;
        if (t <= acc) return phase;
    }
    return std::nullopt;
}

double weighted_norm(const ReducedState& q, const DerivedRates& rates) {
    return std::max({std::abs(q.v) / rates.beta, std::abs(q.theta),
                     std::abs(q.omega) / rates.alpha});
}

double weighted_distance(const ReducedState& a, const ReducedState& b,
                         const DerivedRates& rates) {
    return weighted_norm(ReducedState{a.v - b.v, a.theta - b.theta, a.omega - b.omega}, rates);
}

}  // namespace ddtopt
