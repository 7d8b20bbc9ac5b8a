#include "ddtopt/oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace ddtopt {

namespace {

constexpr std::array<TorquePhase, 4> kPhases = {TorquePhase::BetaPlus, TorquePhase::BetaMinus,
                                                TorquePhase::AlphaPlus, TorquePhase::AlphaMinus};

struct Sequence {
    std::array<TorquePhase, 3> phases;
};

// All three-phase sequences with distinct consecutive phases; shorter plans
// arise via zero durations.
std::vector<Sequence> all_sequences() {
    std::vector<Sequence> seqs;
    for (TorquePhase a : kPhases)
        for (TorquePhase b : kPhases)
            for (TorquePhase c : kPhases) {
                if (a == b || b == c) continue;
                seqs.push_back({{a, b, c}});
            }
    return seqs;
}

struct GridPoint {
    std::array<double, 3> durations{0.0, 0.0, 0.0};
    double time = std::numeric_limits<double>::infinity();
    double dist = std::numeric_limits<double>::infinity();
    bool valid = false;
};

struct Window {
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{0.0, 0.0, 0.0};
};

ReducedState propagate_seq(const ReducedState& q0, const Sequence& seq,
                           const std::array<double, 3>& t, const DerivedRates& rates) {
    ReducedState q = step_phase(q0, seq.phases[0], t[0], rates);
    q = step_phase(q, seq.phases[1], t[1], rates);
    return step_phase(q, seq.phases[2], t[2], rates);
}

struct SweepResult {
    GridPoint best_ball;        // min time among points inside the target ball
    GridPoint best_dist;        // min endpoint distance overall
    std::vector<GridPoint> seeds;  // well separated low-distance points
};

// Exhaustive sweep of one sequence over one window. Collects up to max_seeds
// candidate basins by endpoint distance, separated pairwise in duration
// space so distinct solution branches each keep a representative.
SweepResult sweep_window(const ReducedState& q0, const Sequence& seq, const Window& win, int n,
                         double ball_tol, const ReducedState& target, const DerivedRates& rates,
                         std::size_t max_seeds) {
    SweepResult out;
    std::array<std::vector<double>, 3> axes;
    double sep = 0.0;
    for (int k = 0; k < 3; ++k) {
        auto& ax = axes[static_cast<std::size_t>(k)];
        ax.resize(static_cast<std::size_t>(n));
        const double lo = win.lo[static_cast<std::size_t>(k)];
        const double hi = win.hi[static_cast<std::size_t>(k)];
        for (int i = 0; i < n; ++i)
            ax[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
        sep = std::max(sep, (hi - lo) / 8.0);
    }
    auto offer_seed = [&](const GridPoint& p) {
        if (max_seeds == 0) return;
        for (auto& s : out.seeds) {
            const double gap = std::max({std::abs(s.durations[0] - p.durations[0]),
                                         std::abs(s.durations[1] - p.durations[1]),
                                         std::abs(s.durations[2] - p.durations[2])});
            if (gap < sep) {
                if (p.dist < s.dist) s = p;
                return;
            }
        }
        if (out.seeds.size() < max_seeds) {
            out.seeds.push_back(p);
            return;
        }
        auto worst = std::max_element(out.seeds.begin(), out.seeds.end(),
                                      [](const GridPoint& a, const GridPoint& b) {
                                          return a.dist < b.dist;
                                      });
        if (p.dist < worst->dist) *worst = p;
    };

    for (double t1 : axes[0]) {
        const ReducedState q1 = step_phase(q0, seq.phases[0], t1, rates);
        for (double t2 : axes[1]) {
            const ReducedState q2 = step_phase(q1, seq.phases[1], t2, rates);
            for (double t3 : axes[2]) {
                const ReducedState q3 = step_phase(q2, seq.phases[2], t3, rates);
                const double d = weighted_distance(q3, target, rates);
                GridPoint p;
                p.durations = {t1, t2, t3};
                p.time = t1 + t2 + t3;
                p.dist = d;
                p.valid = true;
                if (d <= ball_tol && p.time < out.best_ball.time) out.best_ball = p;
                if (d < out.best_dist.dist) out.best_dist = p;
                offer_seed(p);
            }
        }
    }
    return out;
}

// Newton iteration on the endpoint map with durations clamped non-negative.
// Pure propagation and generic root finding; no synthesis formulas.
bool polish_newton(const ReducedState& q0, const Sequence& seq, std::array<double, 3>& t,
                   const ReducedState& target, const DerivedRates& rates) {
    constexpr int kMaxIter = 80;
    constexpr double kFdStep = 1e-7;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        const ReducedState end = propagate_seq(q0, seq, t, rates);
        const std::array<double, 3> resid = {end.v - target.v, end.theta - target.theta,
                                             end.omega - target.omega};
        const double err = std::max({std::abs(resid[0]) / rates.beta, std::abs(resid[1]),
                                     std::abs(resid[2]) / rates.alpha});
        if (err < 1e-13) return true;
        double A[3][4];
        for (int k = 0; k < 3; ++k) {
            std::array<double, 3> tp = t;
            tp[static_cast<std::size_t>(k)] += kFdStep;
            const ReducedState ep = propagate_seq(q0, seq, tp, rates);
            A[0][k] = (ep.v - end.v) / kFdStep;
            A[1][k] = (ep.theta - end.theta) / kFdStep;
            A[2][k] = (ep.omega - end.omega) / kFdStep;
        }
        for (int i = 0; i < 3; ++i) A[i][3] = resid[static_cast<std::size_t>(i)];
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int row = col + 1; row < 3; ++row)
                if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
            if (std::abs(A[piv][col]) < 1e-12) return false;
            if (piv != col)
                for (int j = col; j < 4; ++j) std::swap(A[piv][j], A[col][j]);
            for (int row = 0; row < 3; ++row) {
                if (row == col) continue;
                const double f = A[row][col] / A[col][col];
                for (int j = col; j < 4; ++j) A[row][j] -= f * A[col][j];
            }
        }
        bool moved = false;
        for (int k = 0; k < 3; ++k) {
            const double step = A[k][3] / A[k][k];
            const double nk = std::max(0.0, t[static_cast<std::size_t>(k)] - step);
            if (nk != t[static_cast<std::size_t>(k)]) moved = true;
            t[static_cast<std::size_t>(k)] = nk;
        }
        if (!moved) return false;
    }
    return false;
}

}  // namespace

double default_t_upper(const ReducedState& q0, const ReducedState& target,
                       const DerivedRates& rates) {
    return 2.0 * (std::abs(q0.v - target.v) / rates.beta +
                  std::max(std::abs(q0.omega), std::abs(q0.omega - target.omega)) / rates.alpha +
                  2.0 * std::sqrt(std::abs(q0.theta - target.theta) / rates.alpha) + 1.0);
}

bool verify_plan(const ReducedState& q0, const PhasePlan& plan, const ReducedState& target,
                 double tol, const DerivedRates& rates) {
    for (const auto& [phase, dur] : plan.phases)
        if (dur < 0.0) return false;
    return weighted_distance(propagate(q0, plan, rates), target, rates) <= tol;
}

OracleResult brute_force_min_time(const ReducedState& q0, const OracleSpec& spec,
                                  const DerivedRates& rates) {
    if (spec.n_grid < 2) throw std::invalid_argument("oracle n_grid must be >= 2");
    if (!(spec.target_tol > 0.0)) throw std::invalid_argument("oracle target_tol must be > 0");
    const double t_upper =
        spec.t_upper > 0.0 ? spec.t_upper : default_t_upper(q0, spec.target, rates);
    const int n = spec.n_grid;
    constexpr std::size_t kMaxSeeds = 8;

    const auto seqs = all_sequences();
    struct SeqState {
        std::vector<GridPoint> seeds;  // candidate basins from the full sweep
        GridPoint center;              // refined by the shrinking windows
        GridPoint final_ball;          // best in-ball hit of the last round
    };
    std::vector<SeqState> states(seqs.size());

    unsigned hw = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
    hw = std::min<unsigned>(hw, static_cast<unsigned>(seqs.size()));

    auto parallel_for = [&](auto&& body) {
        std::vector<std::future<void>> futs;
        std::atomic<std::size_t> next{0};
        for (unsigned w = 0; w < hw; ++w)
            futs.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next.fetch_add(1); i < seqs.size(); i = next.fetch_add(1))
                    body(i);
            }));
        for (auto& f : futs) f.get();
    };

    // Full-domain sweep: candidate basins per sequence.
    double final_step = t_upper / (n - 1);
    {
        const double tol0 = std::max(spec.target_tol, 4.0 * final_step);
        parallel_for([&](std::size_t i) {
            const Window win{{0.0, 0.0, 0.0}, {t_upper, t_upper, t_upper}};
            SweepResult res = sweep_window(q0, seqs[i], win, n, tol0, spec.target, rates,
                                           kMaxSeeds);
            states[i].seeds = std::move(res.seeds);
            states[i].center = res.best_dist;
            states[i].final_ball = res.best_ball;
        });
    }

    // Local refinement around the distance-minimizing center, 10x per round.
    for (int round = 1; round <= spec.refine_rounds; ++round) {
        const double width = t_upper / std::pow(10.0, round);
        const double step = width / (n - 1);
        final_step = step;
        const double tol = std::max(spec.target_tol, 4.0 * step);
        const bool last = round == spec.refine_rounds;
        parallel_for([&](std::size_t i) {
            if (!states[i].center.valid) return;
            Window win;
            for (int k = 0; k < 3; ++k) {
                const double c = states[i].center.durations[static_cast<std::size_t>(k)];
                const double lo = std::max(0.0, c - width / 2.0);
                win.lo[static_cast<std::size_t>(k)] = lo;
                win.hi[static_cast<std::size_t>(k)] = lo + width;
            }
            SweepResult res = sweep_window(q0, seqs[i], win, n, tol, spec.target, rates, 0);
            if (res.best_dist.valid && res.best_dist.dist < states[i].center.dist)
                states[i].center = res.best_dist;
            if (last) states[i].final_ball = res.best_ball;
        });
    }

    // Polish every seed and center to an exact hit; collect the survivors.
    std::size_t best_seq = seqs.size();
    std::array<double, 3> best_durs{0.0, 0.0, 0.0};
    double best_time = std::numeric_limits<double>::infinity();
    bool best_polished = false;
    std::mutex best_mutex;
    if (spec.polish) {
        parallel_for([&](std::size_t i) {
            std::vector<GridPoint> starts = states[i].seeds;
            starts.push_back(states[i].center);
            double local_best = std::numeric_limits<double>::infinity();
            std::array<double, 3> local_durs{};
            for (const GridPoint& s : starts) {
                if (!s.valid) continue;
                std::array<double, 3> t = s.durations;
                if (!polish_newton(q0, seqs[i], t, spec.target, rates)) continue;
                const double total = t[0] + t[1] + t[2];
                if (total < local_best) {
                    local_best = total;
                    local_durs = t;
                }
            }
            if (local_best < std::numeric_limits<double>::infinity()) {
                std::lock_guard<std::mutex> lock(best_mutex);
                if (local_best < best_time) {
                    best_time = local_best;
                    best_durs = local_durs;
                    best_seq = i;
                    best_polished = true;
                }
            }
        });
    }
    if (best_seq == seqs.size()) {
        // No exact hit anywhere: fall back to the final round's in-ball grid
        // minima, validated at the final tolerance.
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            const GridPoint& p = states[i].final_ball;
            if (p.valid && p.time < best_time) {
                best_time = p.time;
                best_durs = p.durations;
                best_seq = i;
            }
        }
    }
    if (best_seq == seqs.size())
        throw UnreachableWithinHorizon(
            "oracle: no candidate reached the target ball (t_upper=" + std::to_string(t_upper) +
            ")");

    PhasePlan plan;
    plan.kind = PlanKind::Empty;
    for (int k = 0; k < 3; ++k)
        plan.phases.emplace_back(seqs[best_seq].phases[static_cast<std::size_t>(k)],
                                 best_durs[static_cast<std::size_t>(k)]);
    plan = normalized(std::move(plan));
    plan.kind = infer_plan_kind(plan);
    OracleResult out;
    out.final_grid_step = final_step;
    out.plan = plan;
    out.time = best_time;
    out.polished = best_polished;
    out.endpoint_error = weighted_distance(propagate(q0, plan, rates), spec.target, rates);
    return out;
}

}  // namespace ddtopt
