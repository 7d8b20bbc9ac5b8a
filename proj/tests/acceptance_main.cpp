// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ddtopt/csv.hpp"
#include "ddtopt/feedback.hpp"
#include "ddtopt/kinematic.hpp"
#include "ddtopt/model.hpp"
#include "ddtopt/oracle.hpp"
#include "ddtopt/regions.hpp"
#include "ddtopt/sim.hpp"
#include "ddtopt/synthesis.hpp"
#include "fixtures.hpp"

using namespace ddtopt;
using ddtopt::testutil::kStudyStates;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion1(const RobotParams& params, const DerivedRates& rates) {
    const auto t0 = std::chrono::steady_clock::now();
    const ReducedState q0{1.0, 4.0, -2.0};
    const RegionLabel label = classify(q0, rates);
    const PhasePlan plan = plan_optimal(q0, rates);
    const TorqueTrajectory traj = simulate_open_loop(q0, plan, 1e-3, rates, params);
    const double endpoint = weighted_norm(traj.samples.back().q, rates);
    const double elapsed = seconds_since(t0);
    const bool pass = label.region == Region::Omega4 && plan.kind == PlanKind::C1ns &&
                      endpoint <= 1e-6 && std::abs(plan.total_time() - 4.5) <= 1e-9 &&
                      elapsed < 1.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "(1,4,-2) label=%s kind=%s total=%.12f endpoint=%.2e runtime=%.3fs",
                  label.to_string().c_str(), plan_kind_name(plan.kind), plan.total_time(),
                  endpoint, elapsed);
    report(1, pass, buf);
}

void criterion2(const DerivedRates& rates) {
    const auto t0 = std::chrono::steady_clock::now();
    const CandidateSet ex1 = plan_nonzero_target({3.0, -M_PI, 2.0}, 2.4, rates);
    const double el1 = seconds_since(t0);
    const auto t1 = std::chrono::steady_clock::now();
    const CandidateSet ex2 = plan_nonzero_target({-1.0, -M_PI, 4.0}, 4.4, rates);
    const double el2 = seconds_since(t1);
    const bool pass = ex1.feasible.size() == 5 && ex1.best.size() == 1 &&
                      ex2.feasible.size() == 5 && ex2.best.size() == 2 && el1 < 1.0 &&
                      el2 < 1.0;
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "appendix example 1: %zu/9 feasible, %zu optimal (want 5/9, 1); "
                  "example 2: %zu/9 feasible, %zu tied optimal (want 5/9, 2); "
                  "runtimes %.3fs/%.3fs",
                  ex1.feasible.size(), ex1.best.size(), ex2.feasible.size(), ex2.best.size(),
                  el1, el2);
    report(2, pass, buf);
    if (!pass) {
        // The reference candidate counts do not reproduce at the stated
        // rates; exhaustive enumeration over all sign structures yields a
        // single non-negative solution there (the speed change alone pins
        // |v|/beta seconds of beta time, sweeping theta far past the target).
        // At alpha = 0.8, beta = 4.0 the counts do reproduce:
        DerivedRates alt;
        alt.alpha = 0.8;
        alt.beta = 4.0;
        const CandidateSet a1 = plan_nonzero_target({3.0, -M_PI, 2.0}, 2.4, alt);
        const CandidateSet a2 = plan_nonzero_target({-1.0, -M_PI, 4.0}, 4.4, alt);
        std::printf("       note: at alpha=0.8 beta=4.0 the same states give %zu/9 (%zu "
                    "optimal) and %zu/9 (%zu tied), matching the reference counts\n",
                    a1.feasible.size(), a1.best.size(), a2.feasible.size(), a2.best.size());
    }
}

void criterion3(const DerivedRates& rates) {
    const auto t0 = std::chrono::steady_clock::now();
    int failures = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        std::seed_seq seq{20260809u, static_cast<unsigned>(i)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        const ReducedState q0{u(rng), u(rng), u(rng)};
        const double analytic = plan_optimal(q0, rates).total_time();
        OracleSpec spec;
        const OracleResult res = brute_force_min_time(q0, spec, rates);
        const double gap = std::abs(res.time - analytic);
        worst = std::max(worst, gap - res.final_grid_step);
        if (gap > res.final_grid_step) ++failures;
    }
    const double elapsed = seconds_since(t0);
    const bool pass = failures == 0 && elapsed < 600.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "oracle agreement on 100 seeded states: %d failures, worst excess %.3e, "
                  "runtime %.1fs",
                  failures, worst, elapsed);
    report(3, pass, buf);
}

void criterion4(const DerivedRates& rates) {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    int lemma3_checked = 0, lemma3_violations = 0;
    int lemma10_checked = 0, lemma10_violations = 0;
    while (lemma3_checked < 10000 || lemma10_checked < 10000) {
        const ReducedState q{u(rng), u(rng), u(rng)};
        const double H1 = h1(q, rates), H2 = h2(q, rates);
        const bool omega3 = in_omega3(q, rates);
        if (lemma3_checked < 10000 && omega3 &&
            ((H1 < 0 && H2 < 0) || (H1 > 0 && H2 > 0))) {
            const DurationFormulas d = duration_formulas(q, rates);
            if (d.t_c2a && d.t_c2b_literal) {
                ++lemma3_checked;
                if (!(*d.t_c2a < *d.t_c2b_literal)) ++lemma3_violations;
            }
        }
        if (lemma10_checked < 10000 && omega3 && H1 * H2 <= 0.0) {
            const DurationFormulas d = duration_formulas(q, rates);
            if (d.t_c1ns && d.t_c2b_planner) {
                ++lemma10_checked;
                if (!(*d.t_c1ns <= *d.t_c2b_planner)) ++lemma10_violations;
                if (d.t_c2b_literal && !(*d.t_c1ns <= *d.t_c2b_literal)) ++lemma10_violations;
            }
        }
    }
    const bool pass = lemma3_violations == 0 && lemma10_violations == 0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "t_C2a < t_C2b on %d samples (%d violations); t_C1ns <= t_C2b on %d samples "
                  "(%d violations)",
                  lemma3_checked, lemma3_violations, lemma10_checked, lemma10_violations);
    report(4, pass, buf);
}

void criterion5(const RobotParams& params, const DerivedRates& rates) {
    const double dt = 1e-4;
    double worst_gap = 0.0, worst_half = 0.0;
    bool pass = true;
    for (const ReducedState& q0 : kStudyStates) {
        const PhasePlan plan = plan_optimal(q0, rates);
        FeedbackSimOptions opt;
        opt.dt = dt;
        opt.t_max = 30.0;
        const TorqueTrajectory fb = simulate_feedback(q0, SynthesisFlavor::Gamma1, rates,
                                                      params, opt);
        const double gap = open_closed_loop_gap(fb, q0, plan, rates);
        opt.dt = dt / 2.0;
        const TorqueTrajectory fb2 = simulate_feedback(q0, SynthesisFlavor::Gamma1, rates,
                                                       params, opt);
        const double gap2 = open_closed_loop_gap(fb2, q0, plan, rates);
        worst_gap = std::max(worst_gap, gap);
        worst_half = std::max(worst_half, gap2);
        if (!fb.converged || !fb2.converged) pass = false;
        if (gap > 10.0 * dt) pass = false;
        // first-order convergence: the halved-step gap must halve, unless
        // both gaps already sit at the switching-time refinement floor
        if (!(gap2 <= 0.55 * gap || gap2 <= 1e-9)) pass = false;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "six ICs: sup gap %.3e (bound %.1e); halved-step gap %.3e (floor 1e-9)",
                  worst_gap, 10.0 * dt, worst_half);
    report(5, pass, buf);
}

void criterion6(const RobotParams& params, const DerivedRates& rates) {
    FeedbackSimOptions opt;
    opt.dt = 1e-4;
    opt.t_max = 30.0;
    const ReducedState q0{1.0, 4.0, -2.0};
    const TorqueTrajectory g1 = simulate_feedback(q0, SynthesisFlavor::Gamma1, rates, params,
                                                  opt);
    const TorqueTrajectory g2 = simulate_feedback(q0, SynthesisFlavor::Gamma2, rates, params,
                                                  opt);
    const bool pass = g1.converged && g2.converged && g1.omega4_exit_surface &&
                      *g1.omega4_exit_surface == 1 && g2.omega4_exit_surface &&
                      *g2.omega4_exit_surface == 2;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "Gamma1 exit surface H%d (want H1), Gamma2 exit surface H%d (want H2); "
                  "converged %d/%d",
                  g1.omega4_exit_surface.value_or(0), g2.omega4_exit_surface.value_or(0),
                  g1.converged ? 1 : 0, g2.converged ? 1 : 0);
    report(6, pass, buf);
}

void criterion7(const RobotParams& params, const DerivedRates& rates) {
    KinematicSimOptions opt;
    opt.dt = 1e-3;
    opt.t_max = 60.0;
    opt.k_omega = 1.0;

    RefSignal static_ref;
    static_ref.samples = {{0.0, 0.0, 5.0}};  // theta_d = pi/2, |v_d| = 5 > v_max

    auto final_error = [&](KinematicController c, const RefSignal& ref) {
        const KinematicTrajectory traj = simulate_kinematic(PoseState{}, c, ref, params,
                                                            rates, opt);
        return std::abs(wrap_angle(traj.samples.back().pose.theta -
                                   ref.heading_at(traj.samples.back().t).theta_d));
    };
    const double e_cont = final_error(KinematicController::Continuous, static_ref);
    const double e_sat = final_error(KinematicController::Saturated, static_ref);
    const double e_mod = final_error(KinematicController::Modified, static_ref);
    const double e_hyb = final_error(KinematicController::Hybrid, static_ref);

    RefSignal tv_ref;  // v_d(t) = [1, 1+t], sampled at the control rate
    for (double t = 0.0; t <= opt.t_max + opt.dt; t += opt.dt)
        tv_ref.samples.push_back({t, 1.0, 1.0 + t});
    auto mean_error = [&](KinematicController c) {
        const KinematicTrajectory traj = simulate_kinematic(PoseState{}, c, tv_ref, params,
                                                            rates, opt);
        return mean_heading_error(traj, tv_ref, 10.0, 60.0);
    };
    const double m_cont = mean_error(KinematicController::Continuous);
    const double m_mod = mean_error(KinematicController::Modified);
    const double m_hyb = mean_error(KinematicController::Hybrid);

    const bool pass = e_cont > 0.1 && e_sat <= 1e-3 && e_mod <= 1e-3 && e_hyb <= 1e-3 &&
                      m_mod < m_cont && m_hyb < m_cont;
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "static: cont %.3f (>0.1), sat %.1e, mod %.1e, hyb %.1e (<=1e-3); "
                  "time-varying mean err [10,60]s: cont %.3f, mod %.4f, hyb %.4f",
                  e_cont, e_sat, e_mod, e_hyb, m_cont, m_mod, m_hyb);
    report(7, pass, buf);
}

void criterion8(const RobotParams& params, const DerivedRates& rates) {
    std::mt19937_64 rng(808080);
    std::uniform_real_distribution<double> u(-5.0, 5.0);

    // partition totality and disjointness
    int label_failures = 0;
    for (int i = 0; i < 100000; ++i) {
        const ReducedState q{u(rng), u(rng), u(rng)};
        try {
            (void)classify(q, rates);
        } catch (const AmbiguousRegion&) {
            ++label_failures;
        }
        const double H1 = h1(q, rates), H2 = h2(q, rates);
        if ((H1 < 0 && H2 < 0) && (H1 > 0 && H2 > 0)) ++label_failures;
    }

    // plan validity
    int validity_failures = 0;
    for (int i = 0; i < 10000; ++i) {
        const ReducedState q{u(rng), u(rng), u(rng)};
        const PhasePlan plan = plan_optimal(q, rates);
        if (weighted_norm(propagate(q, plan, rates), rates) > 1e-9) ++validity_failures;
    }

    // Omega4 equal duration
    int duration_failures = 0, duration_checked = 0;
    while (duration_checked < 10000) {
        const ReducedState q{u(rng), u(rng), u(rng)};
        if (!(h1(q, rates) * h2(q, rates) < 0.0) || q.v == 0.0) continue;
        ++duration_checked;
        const auto bab = plan_c1ns_bab(q, rates);
        const auto aba = plan_c1ns_aba(q, rates);
        if (!bab || !aba || std::abs(bab->total_time() - aba->total_time()) > 1e-12)
            ++duration_failures;
    }

    // feasibility diamond for every kinematic command path
    int diamond_failures = 0;
    std::uniform_real_distribution<double> w(-8.0, 8.0);
    for (int i = 0; i < 10000; ++i) {
        auto check = [&](const VelocityCommand& cmd) {
            const VelocityCommand out =
                vw_from_wheels(saturate_wheels(wheels_from_vw(cmd, params), params), params);
            if (std::abs(out.v) / params.r + params.b * std::abs(out.omega) / params.r >
                params.phi_dot_max + 1e-12)
                ++diamond_failures;
        };
        const double theta = w(rng);
        const HeadingRef ref{w(rng), std::abs(w(rng))};
        check(continuous_cmd(theta, ref, 1.0, false, rates));
        check(continuous_cmd(theta, ref, 1.0, true, rates));
        check(prioritized_cmd(w(rng), w(rng), params, rates));
        check(bang_bang_heading(theta, ref.theta_d, rates));
        const VelocityCommand pri = prioritized_cmd(w(rng), w(rng), params, rates);
        if (std::abs(pri.v) / params.r + params.b * std::abs(pri.omega) / params.r >
            params.phi_dot_max + 1e-12)
            ++diamond_failures;
    }

    const bool pass = label_failures == 0 && validity_failures == 0 &&
                      duration_failures == 0 && diamond_failures == 0;
    char buf[384];
    std::snprintf(buf, sizeof(buf),
                  "partition failures %d/100000; plan validity failures %d/10000; equal-duration "
                  "failures %d/10000; diamond failures %d",
                  label_failures, validity_failures, duration_failures, diamond_failures);
    report(8, pass, buf);
}

}  // namespace

int main() {
    RobotParams params;  // defaults: alpha = beta = 2/3, r=1, b=5, phi_dot_max=0.5
    const DerivedRates rates = derive_rates(params);
    std::printf("acceptance suite: alpha=%.6f beta=%.6f v_max=%.3f omega_max=%.3f\n",
                rates.alpha, rates.beta, rates.v_max, rates.omega_max);
    criterion1(params, rates);
    criterion2(rates);
    criterion3(rates);
    criterion4(rates);
    criterion5(params, rates);
    criterion6(params, rates);
    criterion7(params, rates);
    criterion8(params, rates);
    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criterion(s) failed\n", g_failures);
    return g_failures;
}
