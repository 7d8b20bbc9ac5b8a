#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ddtopt/config.hpp"
#include "ddtopt/csv.hpp"
#include "ddtopt/feedback.hpp"
#include "ddtopt/kinematic.hpp"
#include "ddtopt/model.hpp"
#include "ddtopt/oracle.hpp"
#include "ddtopt/regions.hpp"
#include "ddtopt/sim.hpp"
#include "ddtopt/synthesis.hpp"

namespace {

using namespace ddtopt;

struct Common {
    std::string config_path;
    std::string out_dir;

    RobotParams params() const {
        if (!config_path.empty()) return load_params(config_path);
        return RobotParams{};  // defaults give alpha = beta = 2/3
    }

    // DDTOPT_OUT_DIR overrides any --out-dir flag.
    std::filesystem::path resolve(const std::string& file) const {
        std::string dir = out_dir;
        if (const char* env = std::getenv("DDTOPT_OUT_DIR")) dir = env;
        if (dir.empty()) return file;
        std::filesystem::create_directories(dir);
        return std::filesystem::path(dir) / file;
    }
};

std::ofstream open_out(const Common& common, const std::string& file) {
    const auto path = common.resolve(file);
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open output file: " + path.string());
    return os;
}

SynthesisFlavor parse_flavor(const std::string& s) {
    if (s == "g1") return SynthesisFlavor::Gamma1;
    if (s == "g2") return SynthesisFlavor::Gamma2;
    throw CLI::ValidationError("--flavor", "must be g1 or g2");
}

void print_plan(const PhasePlan& plan) {
    write_plan(std::cout, plan);
    std::cout << "kind," << plan_kind_name(plan.kind) << '\n';
}

int cmd_classify(const Common& common, double v, double theta, double omega) {
    const auto rates = derive_rates(common.params());
    const ReducedState q{v, theta, omega};
    const RegionLabel label = classify(q, rates);
    std::cout << label.to_string() << " H1=" << format_double(h1(q, rates))
              << " H2=" << format_double(h2(q, rates)) << '\n';
    return 0;
}

int cmd_plan(const Common& common, double v, double theta, double omega,
             std::optional<double> omega_d, const std::string& flavor, bool all_candidates) {
    const auto rates = derive_rates(common.params());
    const ReducedState q{v, theta, omega};
    if (omega_d) {
        const CandidateSet set = plan_nonzero_target(q, *omega_d, rates);
        if (all_candidates) {
            std::cout << "family,t1,t2,t3,total,feasible,optimal\n";
            for (std::size_t i = 0; i < set.table.size(); ++i) {
                const auto& c = set.table[i];
                const bool best =
                    std::find(set.best.begin(), set.best.end(), i) != set.best.end();
                std::cout << c.family << ',' << format_double(c.durations[0]) << ','
                          << format_double(c.durations[1]) << ','
                          << format_double(c.durations[2]) << ','
                          << format_double(c.feasible ? c.total_time : 0.0) << ','
                          << (c.feasible ? 1 : 0) << ',' << (best ? 1 : 0) << '\n';
            }
        }
        print_plan(set.best_candidate().plan);
        std::cout << "feasible," << set.feasible.size() << "\noptimal-ties," << set.best.size()
                  << '\n';
        return 0;
    }
    print_plan(plan_optimal(q, rates, Tolerance{}, parse_flavor(flavor)));
    return 0;
}

int cmd_feedback(const Common& common, double v, double theta, double omega,
                 const std::string& flavor) {
    const auto params = common.params();
    const auto rates = derive_rates(params);
    const ReducedState q{v, theta, omega};
    const TorqueCommand u = u_fb(q, rates, params, parse_flavor(flavor));
    const RegionLabel label = classify(q, rates);
    std::cout << "u1=" << format_double(u.u1) << " u2=" << format_double(u.u2)
              << " label=" << label.to_string() << '\n';
    return 0;
}

int cmd_simulate(const Common& common, double v, double theta, double omega,
                 const std::string& plan_file, bool feedback_mode, const std::string& flavor,
                 double dt, double sample_dt, double t_max, const std::string& out,
                 const std::string& events_out) {
    const auto params = common.params();
    const auto rates = derive_rates(params);
    const ReducedState q0{v, theta, omega};
    TorqueTrajectory traj;
    if (feedback_mode) {
        FeedbackSimOptions opt;
        opt.dt = dt;
        opt.t_max = t_max;
        traj = simulate_feedback(q0, parse_flavor(flavor), rates, params, opt);
    } else {
        PhasePlan plan;
        if (!plan_file.empty())
            plan = read_plan_file(plan_file);
        else
            plan = plan_optimal(q0, rates, Tolerance{}, parse_flavor(flavor));
        traj = simulate_open_loop(q0, plan, sample_dt, rates, params);
    }
    if (!out.empty()) {
        auto os = open_out(common, out);
        write_torque_csv(os, traj);
    }
    if (!events_out.empty()) {
        auto os = open_out(common, events_out);
        write_events_csv(os, traj.events);
    }
    const auto& last = traj.samples.back();
    std::cout << "final t=" << format_double(last.t) << " v=" << format_double(last.q.v)
              << " theta=" << format_double(last.q.theta)
              << " omega=" << format_double(last.q.omega) << '\n';
    if (traj.omega4_exit_surface)
        std::cout << "omega4-exit-surface,H" << *traj.omega4_exit_surface << '\n';
    if (!traj.converged) {
        std::cout << "did-not-converge\n";
        return 1;
    }
    return 0;
}

int cmd_track(const Common& common, const std::string& controller, const std::string& ref_file,
              double theta0, double k_omega, double dt, double t_max,
              const std::string& out) {
    const auto params = common.params();
    const auto rates = derive_rates(params);
    const auto ctrl = kinematic_controller_from_name(controller);
    if (!ctrl) throw CLI::ValidationError("--controller", "unknown controller " + controller);
    const RefSignal ref = read_ref_csv(ref_file);
    KinematicSimOptions opt;
    opt.dt = dt;
    opt.t_max = t_max;
    opt.k_omega = k_omega;
    PoseState pose;
    pose.theta = theta0;
    const KinematicTrajectory traj = simulate_kinematic(pose, *ctrl, ref, params, rates, opt);
    if (!out.empty()) {
        auto os = open_out(common, out);
        write_kinematic_csv(os, traj);
    }
    const auto& last = traj.samples.back();
    const double err = wrap_angle(last.pose.theta - ref.heading_at(last.t).theta_d);
    std::cout << "final t=" << format_double(last.t)
              << " theta=" << format_double(last.pose.theta)
              << " heading-error=" << format_double(err) << '\n';
    return 0;
}

int cmd_oracle_check(const Common& common, double v, double theta, double omega,
                     std::optional<double> omega_d, int n_grid) {
    const auto rates = derive_rates(common.params());
    const ReducedState q0{v, theta, omega};
    double analytic = 0.0;
    OracleSpec spec;
    spec.n_grid = n_grid;
    if (omega_d) {
        spec.target = ReducedState{0.0, 0.0, *omega_d};
        analytic = plan_nonzero_target(q0, *omega_d, rates).best_time;
    } else {
        analytic = plan_optimal(q0, rates).total_time();
    }
    const OracleResult res = brute_force_min_time(q0, spec, rates);
    std::cout << "analytic=" << format_double(analytic) << " oracle=" << format_double(res.time)
              << " gap=" << format_double(res.time - analytic)
              << " final-grid-step=" << format_double(res.final_grid_step) << '\n';
    return 0;
}

int cmd_sweep(const Common& common, const std::string& mode, int n, unsigned seed, double box,
              int threads, const std::string& out) {
    const auto params = common.params();
    const auto rates = derive_rates(params);
    struct Row {
        ReducedState q;
        std::string text;
    };
    std::vector<Row> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::seed_seq seq{seed, static_cast<unsigned>(i)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> u(-box, box);
        rows[static_cast<std::size_t>(i)].q = ReducedState{u(rng), u(rng), u(rng)};
    }
    const unsigned hw = threads > 0 ? static_cast<unsigned>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            auto& row = rows[static_cast<std::size_t>(i)];
            const ReducedState q = row.q;
            std::ostringstream os;
            os << i << ',' << format_double(q.v) << ',' << format_double(q.theta) << ','
               << format_double(q.omega) << ',';
            if (mode == "validity") {
                const PhasePlan plan = plan_optimal(q, rates);
                const double err = weighted_norm(propagate(q, plan, rates), rates);
                os << format_double(plan.total_time()) << ',' << format_double(err);
            } else if (mode == "oracle") {
                OracleSpec spec;
                spec.threads = 1;
                const OracleResult res = brute_force_min_time(q, spec, rates);
                const double analytic = plan_optimal(q, rates).total_time();
                os << format_double(analytic) << ',' << format_double(res.time) << ','
                   << format_double(res.time - analytic);
            } else if (mode == "feedback") {
                FeedbackSimOptions opt;
                opt.t_max = 200.0;
                const TorqueTrajectory traj =
                    simulate_feedback(q, SynthesisFlavor::Gamma1, rates, params, opt);
                os << format_double(traj.end_time()) << ',' << (traj.converged ? 1 : 0);
            } else {
                throw CLI::ValidationError("--mode", "unknown sweep mode " + mode);
            }
            row.text = os.str();
        }
    };
    std::vector<std::future<void>> futs;
    for (unsigned w = 0; w < hw; ++w) futs.push_back(std::async(std::launch::async, worker));
    for (auto& f : futs) f.get();

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out.empty()) {
        file = open_out(common, out);
        os = &file;
    }
    if (mode == "validity")
        *os << "i,v,theta,omega,total_time,endpoint_err\n";
    else if (mode == "oracle")
        *os << "i,v,theta,omega,analytic,oracle,gap\n";
    else
        *os << "i,v,theta,omega,end_time,converged\n";
    for (const auto& row : rows) *os << row.text << '\n';
    return 0;
}

int cmd_surface_dump(const Common& common, double alpha, double beta, double v_lo, double v_hi,
                     double w_lo, double w_hi, int n, const std::string& out_prefix) {
    DerivedRates rates;
    rates.alpha = alpha;
    rates.beta = beta;
    for (int surface : {1, 2}) {
        auto os = open_out(common, out_prefix + (surface == 1 ? "_h1.csv" : "_h2.csv"));
        os << "v,theta,omega\n";
        for (int i = 0; i < n; ++i) {
            const double v = v_lo + (v_hi - v_lo) * i / (n - 1);
            for (int j = 0; j < n; ++j) {
                const double w = w_lo + (w_hi - w_lo) * j / (n - 1);
                double theta = -w * std::abs(w) / (2.0 * alpha);
                if (surface == 2) theta -= w * std::abs(v) / beta;
                os << format_double(v) << ',' << format_double(theta) << ','
                   << format_double(w) << '\n';
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-optimal velocity control for differential drive robots"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--config", common.config_path, "JSON robot parameter file");
    app.add_option("--out-dir", common.out_dir,
                   "output directory (DDTOPT_OUT_DIR overrides)");

    double v = 0.0, theta = 0.0, omega = 0.0;
    std::string flavor = "g1";

    auto* classify_cmd = app.add_subcommand("classify", "Label a reduced state");
    classify_cmd->add_option("--v", v)->required();
    classify_cmd->add_option("--theta", theta)->required();
    classify_cmd->add_option("--omega", omega)->required();

    auto* plan_cmd = app.add_subcommand("plan", "Time-optimal phase plan for a state");
    double omega_d_value = 0.0;
    bool all_candidates = false;
    plan_cmd->add_option("--v", v)->required();
    plan_cmd->add_option("--theta", theta)->required();
    plan_cmd->add_option("--omega", omega)->required();
    auto* omega_d_opt = plan_cmd->add_option("--omega-d", omega_d_value,
                                             "target angular velocity (nine-candidate mode)");
    plan_cmd->add_flag("--all-candidates", all_candidates,
                       "dump the full candidate table (with --omega-d)");
    plan_cmd->add_option("--flavor", flavor, "g1 or g2");

    auto* fb_cmd = app.add_subcommand("feedback", "Feedback torque at a state");
    fb_cmd->add_option("--v", v)->required();
    fb_cmd->add_option("--theta", theta)->required();
    fb_cmd->add_option("--omega", omega)->required();
    fb_cmd->add_option("--flavor", flavor, "g1 or g2");

    auto* sim_cmd = app.add_subcommand("simulate", "Integrate open-loop plans or the closed loop");
    std::string plan_file, out_csv, events_csv;
    bool feedback_mode = false;
    double dt = 1e-4, sample_dt = 1e-2, t_max = 60.0;
    sim_cmd->add_option("--v", v)->required();
    sim_cmd->add_option("--theta", theta)->required();
    sim_cmd->add_option("--omega", omega)->required();
    sim_cmd->add_option("--plan-file", plan_file, "phase,duration lines; default: plan_optimal");
    sim_cmd->add_flag("--feedback", feedback_mode, "closed loop under the feedback law");
    sim_cmd->add_option("--flavor", flavor, "g1 or g2");
    sim_cmd->add_option("--dt", dt, "feedback integration step");
    sim_cmd->add_option("--sample-dt", sample_dt, "open-loop sample spacing");
    sim_cmd->add_option("--t-max", t_max);
    sim_cmd->add_option("--out", out_csv, "trajectory CSV path");
    sim_cmd->add_option("--events", events_csv, "events CSV path");

    auto* track_cmd = app.add_subcommand("track", "Kinematic velocity tracking");
    std::string controller = "modified", ref_file;
    double theta0 = 0.0, k_omega = 1.0, kin_dt = 1e-3;
    track_cmd->add_option("--controller", controller, "continuous|saturated|modified|hybrid");
    track_cmd->add_option("--ref-file", ref_file, "CSV of t,vdx,vdy")->required();
    track_cmd->add_option("--theta0", theta0, "initial heading");
    track_cmd->add_option("--k-omega", k_omega);
    track_cmd->add_option("--dt", kin_dt);
    track_cmd->add_option("--t-max", t_max);
    track_cmd->add_option("--out", out_csv, "trajectory CSV path");

    auto* oracle_cmd = app.add_subcommand("oracle-check", "Brute-force vs analytic time");
    int n_grid = 60;
    oracle_cmd->add_option("--v", v)->required();
    oracle_cmd->add_option("--theta", theta)->required();
    oracle_cmd->add_option("--omega", omega)->required();
    auto* oracle_wd = oracle_cmd->add_option("--omega-d", omega_d_value);
    oracle_cmd->add_option("--n-grid", n_grid);

    auto* sweep_cmd = app.add_subcommand("sweep", "Randomized property sweeps");
    std::string sweep_mode = "validity";
    int sweep_n = 100, sweep_threads = 0;
    unsigned sweep_seed = 1;
    double sweep_box = 5.0;
    sweep_cmd->add_option("--mode", sweep_mode, "validity|oracle|feedback");
    sweep_cmd->add_option("--n", sweep_n);
    sweep_cmd->add_option("--seed", sweep_seed);
    sweep_cmd->add_option("--box", sweep_box, "components drawn from [-box, box]");
    sweep_cmd->add_option("--threads", sweep_threads);
    sweep_cmd->add_option("--out", out_csv, "CSV path (default stdout)");

    auto* dump_cmd = app.add_subcommand("surface-dump", "Point grids on H1=0 and H2=0");
    double dump_alpha = 0.5, dump_beta = 1.0;
    double dump_vlo = -2.0, dump_vhi = 2.0, dump_wlo = -2.0, dump_whi = 2.0;
    int dump_n = 41;
    std::string dump_prefix = "surface";
    dump_cmd->add_option("--alpha", dump_alpha);
    dump_cmd->add_option("--beta", dump_beta);
    dump_cmd->add_option("--v-min", dump_vlo);
    dump_cmd->add_option("--v-max", dump_vhi);
    dump_cmd->add_option("--omega-min", dump_wlo);
    dump_cmd->add_option("--omega-max", dump_whi);
    dump_cmd->add_option("--n", dump_n);
    dump_cmd->add_option("--out-prefix", dump_prefix);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (classify_cmd->parsed()) return cmd_classify(common, v, theta, omega);
        if (plan_cmd->parsed())
            return cmd_plan(common, v, theta, omega,
                            omega_d_opt->count() ? std::optional<double>(omega_d_value)
                                                 : std::nullopt,
                            flavor, all_candidates);
        if (fb_cmd->parsed()) return cmd_feedback(common, v, theta, omega, flavor);
        if (sim_cmd->parsed())
            return cmd_simulate(common, v, theta, omega, plan_file, feedback_mode, flavor, dt,
                                sample_dt, t_max, out_csv, events_csv);
        if (track_cmd->parsed())
            return cmd_track(common, controller, ref_file, theta0, k_omega, kin_dt, t_max,
                             out_csv);
        if (oracle_cmd->parsed())
            return cmd_oracle_check(common, v, theta, omega,
                                    oracle_wd->count() ? std::optional<double>(omega_d_value)
                                                       : std::nullopt,
                                    n_grid);
        if (sweep_cmd->parsed())
            return cmd_sweep(common, sweep_mode, sweep_n, sweep_seed, sweep_box, sweep_threads,
                             out_csv);
        if (dump_cmd->parsed())
            return cmd_surface_dump(common, dump_alpha, dump_beta, dump_vlo, dump_vhi, dump_wlo,
                                    dump_whi, dump_n, dump_prefix);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
