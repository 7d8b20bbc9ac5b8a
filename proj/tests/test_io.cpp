#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ddtopt/config.hpp"
#include "ddtopt/csv.hpp"
#include "ddtopt/sim.hpp"
#include "ddtopt/synthesis.hpp"
#include "test_util.hpp"

using namespace ddtopt;
using namespace ddtopt::testutil;

TEST_CASE("config parsing") {
    const char* text = R"({
        "r": 1.0, "b": 5.0, "m": 3.0, "J_r": 1.2,
        "u_m": 1.0, "phi_dot_max": 0.5, "c1": 1.0, "c2": 0.1
    })";
    const RobotParams p = parse_params_json(text);
    const DerivedRates r = derive_rates(p);
    CHECK(r.alpha == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(r.beta == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    const char* with_overrides = R"({
        "r": 1.0, "b": 5.0, "m": 3.0, "J_r": 1.2,
        "u_m": 1.0, "phi_dot_max": 0.5, "c1": 1.0, "c2": 0.1,
        "alpha": 1.0, "beta": 1.0
    })";
    const DerivedRates ro = derive_rates(parse_params_json(with_overrides));
    CHECK(ro.alpha == 1.0);
    CHECK(ro.beta == 1.0);

    CHECK_THROWS_AS(parse_params_json("{\"r\": 1.0}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_params_json("not json"), std::invalid_argument);
    // invariant violation: c1 == c2
    CHECK_THROWS_AS(parse_params_json(R"({
        "r": 1.0, "b": 5.0, "m": 3.0, "J_r": 1.2,
        "u_m": 1.0, "phi_dot_max": 0.5, "c1": 0.5, "c2": 0.5
    })"),
                    std::invalid_argument);
}

TEST_CASE("config json round trip") {
    RobotParams p = params_paper();
    p.alpha_override = 0.25;
    const RobotParams q = parse_params_json(params_to_json(p));
    CHECK(q.r == p.r);
    CHECK(q.J_r == p.J_r);
    REQUIRE(q.alpha_override.has_value());
    CHECK(*q.alpha_override == 0.25);
    CHECK(!q.beta_override.has_value());
}

TEST_CASE("plan text round trip is lossless") {
    const DerivedRates r = rates_paper();
    const ReducedState q0{1.0, 4.0, -2.0};
    const PhasePlan plan = plan_optimal(q0, r);
    std::stringstream ss;
    write_plan(ss, plan);
    const PhasePlan back = read_plan(ss);
    REQUIRE(back.phases.size() == plan.phases.size());
    for (std::size_t i = 0; i < plan.phases.size(); ++i) {
        CHECK(back.phases[i].first == plan.phases[i].first);
        CHECK(back.phases[i].second == plan.phases[i].second);  // 17 digits: bit-exact
    }
    const ReducedState a = propagate(q0, plan, r);
    const ReducedState b = propagate(q0, back, r);
    CHECK(a.v == b.v);
    CHECK(a.theta == b.theta);
    CHECK(a.omega == b.omega);
}

TEST_CASE("format_double survives a round trip") {
    for (double x : {1.0 / 3.0, -2.0 / 3.0, 4.5, 1e-17, -0.0, 3.141592653589793}) {
        const std::string s = format_double(x);
        CHECK(std::stod(s) == x);
    }
}

TEST_CASE("torque csv columns") {
    RobotParams p = params_paper();
    const DerivedRates r = derive_rates(p);
    const PhasePlan plan = plan_optimal({1.0, 4.0, -2.0}, r);
    const TorqueTrajectory traj = simulate_open_loop({1.0, 4.0, -2.0}, plan, 0.5, r, p);
    std::stringstream ss;
    write_torque_csv(ss, traj);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "t,v,theta,omega,u1,u2");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == traj.samples.size());
}

TEST_CASE("events csv and ref csv") {
    std::stringstream ss;
    write_events_csv(ss, {{0.5, "switch to beta-"}});
    CHECK(ss.str() == "t,event\n0.5,switch to beta-\n");

    const auto tmp = std::filesystem::temp_directory_path() / "ddtopt_ref_test.csv";
    {
        std::ofstream out(tmp);
        out << "t,vdx,vdy\n0,1,0\n2,0,1\n";
    }
    const RefSignal ref = read_ref_csv(tmp.string());
    CHECK(ref.velocity_at(-1.0)[0] == 1.0);
    CHECK(ref.velocity_at(1.0)[0] == 1.0);
    CHECK(ref.velocity_at(2.0)[1] == 1.0);
    CHECK(ref.heading_at(3.0).theta_d == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
    std::filesystem::remove(tmp);
}
