#include "ddtopt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddtopt/regions.hpp"

namespace ddtopt {

namespace {

int sign_of(double x) { return x >= 0.0 ? 1 : -1; }

std::pair<double, double> torques_of(std::optional<TorquePhase> p, const RobotParams& params) {
    if (!p) return {0.0, 0.0};
    return phase_torques(*p, params);
}

}  // namespace

TorqueTrajectory simulate_open_loop(const ReducedState& q0, const PhasePlan& plan,
                                    double sample_dt, const DerivedRates& rates,
                                    const RobotParams& params) {
    if (!(sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be > 0");
    TorqueTrajectory traj;
    ReducedState q = q0;
    double t_start = 0.0;
    const auto first =
        plan.empty() ? std::nullopt : std::optional<TorquePhase>(plan.phases.front().first);
    auto [u1, u2] = torques_of(first, params);
    traj.samples.push_back({0.0, q, u1, u2});

    long k = 1;  // next global grid index
    for (std::size_t i = 0; i < plan.phases.size(); ++i) {
        const auto [phase, dur] = plan.phases[i];
        const double t_end = t_start + dur;
        const auto [pu1, pu2] = phase_torques(phase, params);
        while (k * sample_dt < t_end) {
            const double t = k * sample_dt;
            if (t > t_start)
                traj.samples.push_back({t, step_phase(q, phase, t - t_start, rates), pu1, pu2});
            ++k;
        }
        q = step_phase(q, phase, dur, rates);
        const bool last = (i + 1 == plan.phases.size());
        const auto next = last ? std::nullopt
                               : std::optional<TorquePhase>(plan.phases[i + 1].first);
        const auto [nu1, nu2] = torques_of(next, params);
        traj.samples.push_back({t_end, q, nu1, nu2});
        traj.events.push_back(
            {t_end, last ? "plan complete" : std::string("switch to ") + phase_name(*next)});
        if (k * sample_dt == t_end) ++k;
        t_start = t_end;
    }
    return traj;
}

namespace {

// First phase of the optimal plan for a label; the feedback table realized
// directly so the closed loop does not re-run the planners each step.
std::optional<TorquePhase> phase_for_label(const ReducedState& q, const RegionLabel& label,
                                           SynthesisFlavor flavor) {
    switch (label.region) {
        case Region::Origin: return std::nullopt;
        case Region::Omega1: return TorquePhase::AlphaPlus;
        case Region::Omega2: return TorquePhase::AlphaMinus;
        case Region::Omega4:
            return flavor == SynthesisFlavor::Gamma1 ? beta_phase(-sign_of(q.v))
                                                     : alpha_phase(-sign_of(q.omega));
        case Region::S5:
        case Region::Lomega: return alpha_phase(-sign_of(q.omega));
        case Region::S6:
        case Region::Lv: return beta_phase(-sign_of(q.v));
    }
    throw std::logic_error("unreachable");
}

bool is_surface(Region r) {
    return r == Region::S5 || r == Region::S6 || r == Region::Lv || r == Region::Lomega;
}

RegionLabel classify_total(const ReducedState& q, const DerivedRates& rates,
                           const Tolerance& tol) {
    try {
        return classify(q, rates, tol);
    } catch (const AmbiguousRegion&) {
        Tolerance strict;
        strict.eps_surface = std::numeric_limits<double>::denorm_min();
        return classify(q, rates, strict);
    }
}

}  // namespace

TorqueTrajectory simulate_feedback(const ReducedState& q0, SynthesisFlavor flavor,
                                   const DerivedRates& rates, const RobotParams& params,
                                   const FeedbackSimOptions& options, const Tolerance& tol) {
    if (!(options.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    TorqueTrajectory traj;
    ReducedState q = q0;
    double t = 0.0;
    std::optional<RegionLabel> latched;
    std::optional<Region> prev_region;

    auto resolve_label = [&](const ReducedState& state) -> RegionLabel {
        RegionLabel fresh = classify_total(state, rates, tol);
        if (latched && is_surface(latched->region) && !is_surface(fresh.region) &&
            fresh.region != Region::Origin) {
            double band = 0.0;
            switch (latched->region) {
                case Region::S5: band = std::abs(h1(state, rates)); break;
                case Region::S6: band = std::abs(h2(state, rates)); break;
                default:
                    band = std::max(std::abs(h1(state, rates)), std::abs(h2(state, rates)));
                    break;
            }
            if (band <= options.chatter_eps) return *latched;
        }
        latched = is_surface(fresh.region) ? std::optional<RegionLabel>(fresh) : std::nullopt;
        return fresh;
    };

    // The feedback law switches on the surfaces H1 = 0, H2 = 0 and at the
    // lines v = 0, omega = 0 where the sign refinements flip. Each candidate
    // crossing is bisected so the applied control changes at the true event.
    struct Crossing {
        const char* name;
        int surface;  // 1 for H1, 2 for H2, 0 otherwise
        double (*eval)(const ReducedState&, const DerivedRates&);
        double gate;
    };
    const std::array<Crossing, 4> crossings = {{
        {"H1 zero crossing", 1, [](const ReducedState& s, const DerivedRates& r) { return h1(s, r); },
         options.chatter_eps},
        {"H2 zero crossing", 2, [](const ReducedState& s, const DerivedRates& r) { return h2(s, r); },
         options.chatter_eps},
        {"v sign change", 0, [](const ReducedState& s, const DerivedRates&) { return s.v; }, 0.0},
        {"omega sign change", 0,
         [](const ReducedState& s, const DerivedRates&) { return s.omega; }, 0.0},
    }};

    while (true) {
        if (weighted_norm(q, rates) < options.termination_radius) {
            traj.samples.push_back({t, q, 0.0, 0.0});
            traj.events.push_back({t, "terminated in goal ball"});
            traj.converged = true;
            return traj;
        }
        if (t >= options.t_max) {
            traj.samples.push_back({t, q, 0.0, 0.0});
            traj.events.push_back({t, "t_max reached before convergence"});
            traj.converged = false;
            return traj;
        }
        const RegionLabel label = resolve_label(q);
        if (prev_region == Region::Omega4 && label.region != Region::Omega4 &&
            !traj.omega4_exit_surface) {
            // A switch-time landing exactly on the grid enters the surface
            // band without a sign flip, so the exit is keyed off the label.
            const int surface =
                std::abs(h1(q, rates)) / (2.0 * rates.alpha) <= std::abs(h2(q, rates)) ? 1 : 2;
            traj.omega4_exit_surface = surface;
            traj.events.push_back(
                {t, std::string("left Omega4 via H") + (surface == 1 ? "1" : "2")});
        }
        prev_region = label.region;
        const auto phase = phase_for_label(q, label, flavor);
        if (!phase) {  // origin label but outside the termination ball
            traj.samples.push_back({t, q, 0.0, 0.0});
            traj.events.push_back({t, "origin label reached"});
            traj.converged = true;
            return traj;
        }
        const auto [u1, u2] = phase_torques(*phase, params);
        traj.samples.push_back({t, q, u1, u2});

        const double dt = std::min(options.dt, options.t_max - t);
        ReducedState next = step_phase(q, *phase, dt, rates);

        double tau = dt;
        const Crossing* hit = nullptr;
        if (options.refine_events) {
            for (const auto& c : crossings) {
                const double a = c.eval(q, rates);
                const double b = c.eval(step_phase(q, *phase, tau, rates), rates);
                if (!(a * b < 0.0)) continue;
                if (std::max(std::abs(a), std::abs(b)) <= c.gate) continue;
                double lo = 0.0, hi = tau;
                while (hi - lo > 1e-12) {
                    const double mid = 0.5 * (lo + hi);
                    const double hm = c.eval(step_phase(q, *phase, mid, rates), rates);
                    if (hm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    (hm * a > 0.0 ? lo : hi) = mid;
                }
                const double tc = 0.5 * (lo + hi);
                if (tc < tau) {
                    tau = tc;
                    hit = &c;
                }
            }
            if (hit) next = step_phase(q, *phase, tau, rates);
        }

        q = next;
        t += tau;
        if (hit) traj.events.push_back({t, hit->name});
    }
}

double open_closed_loop_gap(const TorqueTrajectory& fb, const ReducedState& q0,
                            const PhasePlan& plan, const DerivedRates& rates) {
    double gap = 0.0;
    for (const auto& s : fb.samples) {
        const ReducedState ref = plan_state_at(q0, plan, s.t, rates);
        gap = std::max({gap, std::abs(s.q.v - ref.v), std::abs(s.q.theta - ref.theta),
                        std::abs(s.q.omega - ref.omega)});
    }
    return gap;
}

std::array<double, 2> RefSignal::velocity_at(double t) const {
    if (samples.empty()) return {0.0, 0.0};
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double value, const std::array<double, 3>& s) {
                                   return value < s[0];
                               });
    if (it == samples.begin()) return {(*it)[1], (*it)[2]};
    --it;
    return {(*it)[1], (*it)[2]};
}

HeadingRef RefSignal::heading_at(double t) const {
    const auto [vdx, vdy] = velocity_at(t);
    return {std::atan2(vdy, vdx), std::hypot(vdx, vdy)};
}

const char* kinematic_controller_name(KinematicController c) {
    switch (c) {
        case KinematicController::Continuous: return "continuous";
        case KinematicController::Saturated: return "saturated";
        case KinematicController::Modified: return "modified";
        case KinematicController::Hybrid: return "hybrid";
    }
    throw std::logic_error("unreachable");
}

std::optional<KinematicController> kinematic_controller_from_name(const std::string& name) {
    if (name == "continuous") return KinematicController::Continuous;
    if (name == "saturated") return KinematicController::Saturated;
    if (name == "modified") return KinematicController::Modified;
    if (name == "hybrid") return KinematicController::Hybrid;
    return std::nullopt;
}

namespace {

// One RK4 step of the pose kinematics under constant body velocities.
PoseState rk4_pose_step(const PoseState& p, double v, double omega, double dt) {
    auto fx = [&](double theta) { return v * std::cos(theta); };
    auto fy = [&](double theta) { return v * std::sin(theta); };
    const double th1 = p.theta;
    const double th2 = p.theta + 0.5 * omega * dt;
    const double th4 = p.theta + omega * dt;
    PoseState out = p;
    out.x = p.x + dt / 6.0 * (fx(th1) + 4.0 * fx(th2) + fx(th4));
    out.y = p.y + dt / 6.0 * (fy(th1) + 4.0 * fy(th2) + fy(th4));
    out.theta = p.theta + omega * dt;
    out.v = v;
    out.omega = omega;
    return out;
}

}  // namespace

PoseState integrate_constant_twist(PoseState pose, double v, double omega, double dt,
                                   long steps) {
    for (long i = 0; i < steps; ++i) pose = rk4_pose_step(pose, v, omega, dt);
    return pose;
}

KinematicTrajectory simulate_kinematic(const PoseState& pose0, KinematicController controller,
                                       const RefSignal& ref, const RobotParams& params,
                                       const DerivedRates& rates,
                                       const KinematicSimOptions& options) {
    if (!(options.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    KinematicTrajectory traj;
    PoseState pose = pose0;
    HybridMode mode = HybridMode::BangBang;
    double t = 0.0;
    bool rate_warned = false;
    std::optional<double> prev_theta_d;
    const long n_steps = static_cast<long>(std::llround(options.t_max / options.dt));

    for (long i = 0; i <= n_steps; ++i) {
        const HeadingRef href = ref.heading_at(t);
        if (prev_theta_d && !rate_warned) {
            const double rate = std::abs(wrap_angle(href.theta_d - *prev_theta_d)) / options.dt;
            if (rate > rates.omega_max) {
                traj.events.push_back({t, "theta_d rate exceeds omega_max"});
                rate_warned = true;
            }
        }
        prev_theta_d = href.theta_d;

        VelocityCommand cmd;
        switch (controller) {
            case KinematicController::Continuous:
                cmd = continuous_cmd(pose.theta, href, options.k_omega, false, rates);
                break;
            case KinematicController::Saturated:
                cmd = continuous_cmd(pose.theta, href, options.k_omega, true, rates);
                break;
            case KinematicController::Modified: {
                const VelocityCommand c =
                    continuous_cmd(pose.theta, href, options.k_omega, true, rates);
                cmd = prioritized_cmd(c.v, c.omega, params, rates);
                break;
            }
            case KinematicController::Hybrid: {
                const HybridMode before = mode;
                auto [c, m] = hybrid_cmd(pose.theta, href, mode, options.k_omega, params, rates,
                                         options.theta_tol);
                cmd = c;
                mode = m;
                if (before == HybridMode::BangBang && mode == HybridMode::Continuous)
                    traj.events.push_back({t, "hybrid latch to continuous"});
                break;
            }
        }
        const WheelCommand wheels = saturate_wheels(wheels_from_vw(cmd, params), params);
        const VelocityCommand realized = vw_from_wheels(wheels, params);
        pose.v = realized.v;
        pose.omega = realized.omega;
        traj.samples.push_back({t, pose, wheels.phi_dot_R, wheels.phi_dot_L});
        if (i == n_steps) break;
        pose = rk4_pose_step(pose, realized.v, realized.omega, options.dt);
        t += options.dt;
    }
    return traj;
}

double mean_heading_error(const KinematicTrajectory& traj, const RefSignal& ref, double t0,
                          double t1) {
    double sum = 0.0;
    long n = 0;
    for (const auto& s : traj.samples) {
        if (s.t < t0 || s.t > t1) continue;
        sum += std::abs(wrap_angle(s.pose.theta - ref.heading_at(s.t).theta_d));
        ++n;
    }
    return n > 0 ? sum / n : 0.0;
}

}  // namespace ddtopt
