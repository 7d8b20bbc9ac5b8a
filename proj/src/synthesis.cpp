#include "ddtopt/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddtopt {

namespace {

constexpr double kQuiet = std::numeric_limits<double>::quiet_NaN();

int sign_of(double x) { return x >= 0.0 ? 1 : -1; }

PhasePlan make_plan(PlanKind kind,
                    std::initializer_list<std::pair<TorquePhase, double>> phases) {
    PhasePlan plan;
    plan.kind = kind;
    plan.phases.assign(phases);
    return normalized(std::move(plan));
}

}  // namespace

PhasePlan plan_w0_zero(double v0, double theta0, const DerivedRates& rates) {
    const double al = rates.alpha, be = rates.beta;
    if (v0 == 0.0 && theta0 == 0.0) return {};
    const double t2 = std::abs(v0) / be;
    const TorquePhase mid = beta_phase(-sign_of(v0));
    if (theta0 == 0.0) return make_plan(PlanKind::C1ns, {{mid, t2}});
    const int s1 = -sign_of(theta0);
    const double t1 =
        std::sqrt(al * al * v0 * v0 / (be * be) + 4.0 * al * std::abs(theta0)) / (2.0 * al) -
        std::abs(v0) / (2.0 * be);
    return make_plan(PlanKind::C2a,
                     {{alpha_phase(s1), t1}, {mid, t2}, {alpha_phase(-s1), t1}});
}

std::optional<PhasePlan> plan_c2a(const ReducedState& q, const DerivedRates& rates) {
    const double H1 = h1(q, rates), H2 = h2(q, rates);
    int s1;
    if (H1 < 0.0 && H2 < 0.0)
        s1 = 1;
    else if (H1 > 0.0 && H2 > 0.0)
        s1 = -1;
    else
        return std::nullopt;
    const double al = rates.alpha, be = rates.beta;
    const double avb = al * std::abs(q.v) / be;
    // i = 2 root; the i = 1 root never yields a positive third duration.
    const double disc = 2.0 * q.omega * q.omega + avb * avb - 4.0 * s1 * al * q.theta;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double t1 = (-2.0 * s1 * q.omega - avb + root) / (2.0 * al);
    const double t3 = (-avb + root) / (2.0 * al);
    if (t1 <= 0.0 || t3 <= 0.0) return std::nullopt;
    const double t2 = std::abs(q.v) / be;
    return make_plan(PlanKind::C2a, {{alpha_phase(s1), t1},
                                     {beta_phase(-sign_of(q.v)), t2},
                                     {alpha_phase(-s1), t3}});
}

std::optional<PhasePlan> plan_c2b(const ReducedState& q, const DerivedRates& rates) {
    const double H1 = h1(q, rates);
    if (!(q.omega * H1 < 0.0)) return std::nullopt;
    const double al = rates.alpha, be = rates.beta;
    const double t2 = std::abs(q.omega) / al;
    const int s4 = -sign_of(q.omega);
    const double t1 = -H1 / (2.0 * al * q.omega);
    const double vb = std::abs(q.v) / be;
    // Both s3 signs are admissible when t1 exceeds |v|/beta; the -sign(v)
    // branch is then strictly faster. Otherwise s3 = sign(v) is forced.
    int s3;
    if (t1 > vb)
        s3 = (q.v != 0.0) ? -sign_of(q.v) : 1;
    else
        s3 = sign_of(q.v);
    const double t3 = q.v / (s3 * be) + t1;
    if (t1 <= 0.0 || t3 <= 0.0) return std::nullopt;
    return make_plan(PlanKind::C2b, {{beta_phase(s3), t1},
                                     {alpha_phase(s4), t2},
                                     {beta_phase(-s3), t3}});
}

std::optional<PhasePlan> plan_c1ns_bab(const ReducedState& q, const DerivedRates& rates) {
    const double H1 = h1(q, rates), H2 = h2(q, rates);
    if (!(H1 * H2 < 0.0)) return std::nullopt;
    const double al = rates.alpha, be = rates.beta;
    const double t2 = std::abs(q.omega) / al;
    const double t1 = -H1 / (2.0 * al * q.omega);
    const double t3 = std::abs(q.v) / be - t1;
    if (t1 <= 0.0 || t3 <= 0.0) return std::nullopt;
    const TorquePhase outer = beta_phase(-sign_of(q.v));
    return make_plan(PlanKind::C1ns,
                     {{outer, t1}, {alpha_phase(-sign_of(q.omega)), t2}, {outer, t3}});
}

std::optional<PhasePlan> plan_c1ns_aba(const ReducedState& q, const DerivedRates& rates) {
    const double H1 = h1(q, rates), H2 = h2(q, rates);
    if (!(H1 * H2 < 0.0) || q.v == 0.0) return std::nullopt;
    const double al = rates.alpha, be = rates.beta;
    const double t2 = std::abs(q.v) / be;
    const double t1 =
        std::abs(q.omega) * be / (al * std::abs(q.v)) * (H2 / q.omega);
    const double t3 = std::abs(q.omega) / al - t1;
    if (t1 <= 0.0 || t3 <= 0.0) return std::nullopt;
    const TorquePhase outer = alpha_phase(-sign_of(q.omega));
    return make_plan(PlanKind::C1ns,
                     {{outer, t1}, {beta_phase(-sign_of(q.v)), t2}, {outer, t3}});
}

std::optional<PhasePlan> plan_boundary(const ReducedState& q, const DerivedRates& rates,
                                       const RegionLabel& label) {
    const double al = rates.alpha, be = rates.beta;
    const double ta = std::abs(q.omega) / al;
    const double tb = std::abs(q.v) / be;
    const TorquePhase pa = alpha_phase(-sign_of(q.omega));
    const TorquePhase pb = beta_phase(-sign_of(q.v));
    PhasePlan plan;
    switch (label.region) {
        case Region::S5: plan = make_plan(PlanKind::Boundary, {{pa, ta}, {pb, tb}}); break;
        case Region::S6: plan = make_plan(PlanKind::Boundary, {{pb, tb}, {pa, ta}}); break;
        case Region::Lv: plan = make_plan(PlanKind::Boundary, {{pb, tb}}); break;
        case Region::Lomega: plan = make_plan(PlanKind::Boundary, {{pa, ta}}); break;
        default:
            throw std::invalid_argument("plan_boundary: label must be S5, S6, Lv or Lomega");
    }
    const ReducedState end = propagate(q, plan, rates);
    const double tol = 1e-9 * std::max(1.0, weighted_norm(q, rates));
    if (weighted_norm(end, rates) > tol) return std::nullopt;
    return plan;
}

PhasePlan plan_optimal(const ReducedState& q, const DerivedRates& rates, const Tolerance& tol,
                       SynthesisFlavor flavor) {
    const RegionLabel label = classify(q, rates, tol);
    std::optional<PhasePlan> plan;
    switch (label.region) {
        case Region::Origin:
            return {};
        case Region::Omega1:
        case Region::Omega2:
            plan = plan_c2a(q, rates);
            break;
        case Region::Omega4:
            plan = (flavor == SynthesisFlavor::Gamma1) ? plan_c1ns_bab(q, rates)
                                                       : plan_c1ns_aba(q, rates);
            break;
        default:
            plan = plan_boundary(q, rates, label);
            break;
    }
    if (!plan)
        throw SynthesisError(std::string("planner for ") + label.to_string() +
                             " rejected its own region (tolerance misclassification?)");
    return *plan;
}

DurationFormulas duration_formulas(const ReducedState& q, const DerivedRates& rates) {
    DurationFormulas out;
    const double al = rates.alpha, be = rates.beta;
    if (auto c2a = plan_c2a(q, rates)) out.t_c2a = c2a->total_time();
    if (in_omega3(q, rates)) out.t_c2b_literal = -2.0 * q.theta / q.omega + std::abs(q.v) / be;
    if (auto c2b = plan_c2b(q, rates)) out.t_c2b_planner = c2b->total_time();
    if (h1(q, rates) * h2(q, rates) <= 0.0)
        out.t_c1ns = std::abs(q.v) / be + std::abs(q.omega) / al;
    return out;
}

namespace {

TargetCandidate evaluate_candidate(const ReducedState& q0, const ReducedState& target,
                                   const DerivedRates& rates, std::string family,
                                   std::array<double, 3> durations, PlanKind kind,
                                   std::array<TorquePhase, 3> phases) {
    TargetCandidate cand;
    cand.family = std::move(family);
    cand.durations = durations;
    constexpr double kSlack = 1e-12;
    for (double t : durations)
        if (!std::isfinite(t) || t < -kSlack) return cand;
    PhasePlan plan;
    plan.kind = kind;
    for (int i = 0; i < 3; ++i)
        plan.phases.emplace_back(phases[static_cast<std::size_t>(i)],
                                 std::max(durations[static_cast<std::size_t>(i)], 0.0));
    plan = normalized(std::move(plan));
    const ReducedState end = propagate(q0, plan, rates);
    const double tol = 1e-9 * std::max(1.0, weighted_norm(q0, rates));
    if (weighted_distance(end, target, rates) > tol) return cand;
    cand.feasible = true;
    cand.plan = std::move(plan);
    cand.total_time = cand.plan.total_time();
    return cand;
}

}  // namespace

CandidateSet plan_nonzero_target(const ReducedState& q0, double omega_d,
                                 const DerivedRates& rates, double tie_tol_rel) {
    const double al = rates.alpha, be = rates.beta;
    const ReducedState target{0.0, 0.0, omega_d};
    CandidateSet out;

    if (weighted_distance(q0, target, rates) == 0.0) {
        TargetCandidate cand;
        cand.family = "already-at-target";
        cand.durations = {0.0, 0.0, 0.0};
        cand.feasible = true;
        cand.total_time = 0.0;
        out.table.push_back(std::move(cand));
        out.feasible = {0};
        out.best = {0};
        out.best_time = 0.0;
        return out;
    }

    const double v = q0.v, th = q0.theta, om = q0.omega;
    const double t2_beta = std::abs(v) / be;
    const TorquePhase mid_beta = beta_phase(-sign_of(v));
    const double avb = al * std::abs(v) / be;

    // alpha-beta-alpha, opposite outer signs: quadratic in t1, two roots each
    // for s1 = +1 and s1 = -1.
    for (int s1 : {1, -1}) {
        const double disc =
            2.0 * om * om + 2.0 * omega_d * omega_d + avb * avb - 4.0 * s1 * al * th;
        for (int root : {1, -1}) {
            const std::string family = std::string("aba-quad(s1=") + (s1 > 0 ? "+" : "-") +
                                       ",root=" + (root > 0 ? "+" : "-") + ")";
            std::array<double, 3> durs{kQuiet, kQuiet, kQuiet};
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                durs[0] = (-(2.0 * om + s1 * avb) + root * sq) / (2.0 * s1 * al);
                durs[1] = t2_beta;
                durs[2] = (-(2.0 * omega_d + s1 * avb) + root * sq) / (2.0 * s1 * al);
            }
            out.table.push_back(evaluate_candidate(
                q0, target, rates, family, durs, PlanKind::C2a,
                {alpha_phase(s1), mid_beta, alpha_phase(-s1)}));
        }
    }

    // alpha-beta-alpha, equal outer signs: linear in t1, one solution with
    // s1 = sign(omega_d - omega). Singular for v = 0 or omega_d = omega.
    {
        std::array<double, 3> durs{kQuiet, kQuiet, kQuiet};
        int s1 = 1;
        if (v != 0.0 && omega_d != om) {
            s1 = sign_of(omega_d - om);
            durs[0] = be * (om * om - omega_d * omega_d) / (2.0 * al * al * std::abs(v)) -
                      th * be / (s1 * al * std::abs(v)) - om / (s1 * al);
            durs[1] = t2_beta;
            durs[2] = be * (omega_d * omega_d - om * om) / (2.0 * al * al * std::abs(v)) +
                      th * be / (s1 * al * std::abs(v)) + omega_d / (s1 * al);
        }
        out.table.push_back(evaluate_candidate(
            q0, target, rates, "aba-lin", durs, PlanKind::C1ns,
            {alpha_phase(s1), mid_beta, alpha_phase(s1)}));
    }

    // beta-alpha-beta for the four (s4, s6) outer sign pairs.
    const double t2_alpha = std::abs(omega_d - om) / al;
    const int s5 = sign_of(omega_d - om);
    const double k2 = (om * om - omega_d * omega_d) / (2.0 * s5 * al) - th;
    for (int s4 : {1, -1}) {
        for (int s6 : {1, -1}) {
            const std::string family = std::string("bab(s4=") + (s4 > 0 ? "+" : "-") +
                                       ",s6=" + (s6 > 0 ? "+" : "-") + ")";
            std::array<double, 3> durs{kQuiet, kQuiet, kQuiet};
            const double det = s4 * omega_d - s6 * om;
            if (std::abs(det) > 1e-14 * std::max({1.0, std::abs(om), std::abs(omega_d)})) {
                durs[0] = (-(v / be) * omega_d - s6 * k2) / det;
                durs[1] = t2_alpha;
                durs[2] = (s4 * k2 + om * v / be) / det;
            }
            out.table.push_back(evaluate_candidate(
                q0, target, rates, family, durs,
                s4 == s6 ? PlanKind::C1ns : PlanKind::C2b,
                {beta_phase(s4), alpha_phase(s5), beta_phase(s6)}));
        }
    }

    for (std::size_t i = 0; i < out.table.size(); ++i)
        if (out.table[i].feasible) out.feasible.push_back(i);
    if (out.feasible.empty())
        throw SynthesisError("no feasible candidate among the nine sign structures");
    out.best_time = std::numeric_limits<double>::infinity();
    for (std::size_t i : out.feasible)
        out.best_time = std::min(out.best_time, out.table[i].total_time);
    const double tie = tie_tol_rel * std::max(1.0, out.best_time);
    for (std::size_t i : out.feasible)
        if (out.table[i].total_time - out.best_time <= tie) out.best.push_back(i);
    return out;
}

}  // namespace ddtopt
