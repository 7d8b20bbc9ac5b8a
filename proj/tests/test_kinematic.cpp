#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ddtopt/kinematic.hpp"
#include "test_util.hpp"

using namespace ddtopt;
using namespace ddtopt::testutil;

TEST_CASE("continuous law") {
    const DerivedRates r = derive_rates(params_paper());  // v_max = 0.5

    const VelocityCommand a = continuous_cmd(1.0, {1.0, 3.0}, 1.0, true, r);
    CHECK(a.v == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a.omega == doctest::Approx(0.0).epsilon(1e-15));

    const VelocityCommand b = continuous_cmd(M_PI / 2.0, {0.0, 7.0}, 1.0, false, r);
    CHECK(std::abs(b.v) < 1e-12);  // cos(pi/2)

    const VelocityCommand c = continuous_cmd(0.5, {0.0, 1.0}, 1.0, false, r);
    CHECK(c.omega == doctest::Approx(-0.5).epsilon(1e-15));

    CHECK_THROWS_AS(continuous_cmd(0.0, {0.0, 1.0}, 0.0, false, r), std::invalid_argument);
}

TEST_CASE("wheel maps") {
    const RobotParams p = params_paper();  // r=1, b=5
    const DerivedRates r = derive_rates(p);

    const WheelCommand full = wheels_from_vw({r.v_max, 0.0}, p);
    CHECK(full.phi_dot_R == doctest::Approx(p.phi_dot_max).epsilon(1e-15));
    CHECK(full.phi_dot_L == doctest::Approx(p.phi_dot_max).epsilon(1e-15));

    const WheelCommand spin = wheels_from_vw({0.0, r.omega_max}, p);
    CHECK(spin.phi_dot_R == doctest::Approx(p.phi_dot_max).epsilon(1e-15));
    CHECK(spin.phi_dot_L == doctest::Approx(-p.phi_dot_max).epsilon(1e-15));

    const WheelCommand w = wheels_from_vw({1.0, 0.1}, p);
    CHECK(w.phi_dot_R == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(w.phi_dot_L == doctest::Approx(0.5).epsilon(1e-15));

    const VelocityCommand fwd = vw_from_wheels({0.5, 0.5}, p);
    CHECK(fwd.v == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(fwd.omega == 0.0);
    const VelocityCommand rot = vw_from_wheels({0.5, -0.5}, p);
    CHECK(rot.v == 0.0);
    CHECK(rot.omega == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("saturation clamps componentwise") {
    RobotParams p = params_paper();
    const WheelCommand a = saturate_wheels({0.3, -0.2}, p);
    CHECK(a.phi_dot_R == 0.3);
    CHECK(a.phi_dot_L == -0.2);
    const WheelCommand b = saturate_wheels({2.0, 0.1}, p);
    CHECK(b.phi_dot_R == 0.5);
    CHECK(b.phi_dot_L == 0.1);
    const WheelCommand c = saturate_wheels({-2.0, -2.0}, p);
    CHECK(c.phi_dot_R == -0.5);
    CHECK(c.phi_dot_L == -0.5);
}

TEST_CASE("round trip through the wheel maps is exact for feasible commands") {
    const RobotParams p = params_paper();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        // feasible: |v|/r + b|omega|/r <= phi_dot_max
        const double f = u(rng) * p.phi_dot_max;
        const double split = 0.5 * (u(rng) + 1.0);
        const VelocityCommand cmd{f * split * p.r,
                                  f * (1.0 - split) * p.r / p.b};
        const VelocityCommand back = vw_from_wheels(wheels_from_vw(cmd, p), p);
        CHECK(back.v == doctest::Approx(cmd.v).epsilon(1e-14));
        CHECK(back.omega == doctest::Approx(cmd.omega).epsilon(1e-14));
    }
}

TEST_CASE("feasibility diamond invariant for every command path") {
    const RobotParams p = params_paper();
    const DerivedRates r = derive_rates(p);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int i = 0; i < 20000; ++i) {
        const VelocityCommand raw{u(rng), u(rng)};
        const VelocityCommand out = vw_from_wheels(saturate_wheels(wheels_from_vw(raw, p), p), p);
        CHECK(std::abs(out.v) / p.r + p.b * std::abs(out.omega) / p.r <=
              p.phi_dot_max + 1e-12);
        const VelocityCommand pri = prioritized_cmd(raw.v, raw.omega, p, r);
        CHECK(std::abs(pri.v) / p.r + p.b * std::abs(pri.omega) / p.r <=
              p.phi_dot_max + 1e-12);
    }
}

TEST_CASE("prioritized projection") {
    const RobotParams p = params_paper();
    const DerivedRates r = derive_rates(p);

    const VelocityCommand a = prioritized_cmd(0.4, 0.2, p, r);
    CHECK(a.omega == doctest::Approx(r.omega_max).epsilon(1e-15));
    CHECK(a.v == 0.0);  // v_max - b*0.2 < 0

    const VelocityCommand b = prioritized_cmd(0.3, 0.0, p, r);
    CHECK(b.v == 0.3);
    CHECK(b.omega == 0.0);

    const VelocityCommand c = prioritized_cmd(0.5, 0.05, p, r);
    CHECK(c.v == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(c.omega == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("stall reproduction under the unsaturated law") {
    // commanded speed above v_max by eps with the angular command small
    // enough that both raw wheel speeds exceed the bound: the realized
    // angular velocity is exactly zero.
    const RobotParams p = params_paper();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ueps(0.01, 1.0);
    std::uniform_real_distribution<double> usplit(-1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double eps = ueps(rng);
        const double v = p.r * p.phi_dot_max + eps;  // v_max + eps
        const double omega = usplit(rng) * 0.999 * eps / p.b;
        const WheelCommand raw = wheels_from_vw({v, omega}, p);
        CHECK(raw.phi_dot_R > p.phi_dot_max);
        CHECK(raw.phi_dot_L > p.phi_dot_max);
        const VelocityCommand out = vw_from_wheels(saturate_wheels(raw, p), p);
        CHECK(out.omega == 0.0);
        CHECK(out.v == doctest::Approx(p.r * p.phi_dot_max).epsilon(1e-15));
    }
}

TEST_CASE("saturated law: realized omega vanishes only with the command") {
    const RobotParams p = params_paper();
    const DerivedRates r = derive_rates(p);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> uth(-M_PI, M_PI);
    std::uniform_real_distribution<double> umag(0.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        const double theta = uth(rng);
        const HeadingRef ref{uth(rng), umag(rng)};
        const VelocityCommand cmd = continuous_cmd(theta, ref, 1.0, true, r);
        const VelocityCommand out =
            vw_from_wheels(saturate_wheels(wheels_from_vw(cmd, p), p), p);
        if (cmd.omega != 0.0) {
            CHECK(out.omega != 0.0);
            CHECK(out.omega * cmd.omega > 0.0);  // sign preserved
        } else {
            CHECK(out.omega == 0.0);
        }
    }
}

TEST_CASE("bang-bang heading") {
    const DerivedRates r = derive_rates(params_paper());
    const VelocityCommand a = bang_bang_heading(0.0, M_PI / 2.0, r);
    CHECK(a.v == 0.0);
    CHECK(a.omega == r.omega_max);
    const VelocityCommand b = bang_bang_heading(1.0, 1.0, r);
    CHECK(b.omega == 0.0);
    const VelocityCommand c = bang_bang_heading(1.0, -1.0, r);
    CHECK(c.omega == -r.omega_max);
}

TEST_CASE("hybrid latch is one-way") {
    const RobotParams p = params_paper();
    const DerivedRates r = derive_rates(p);
    const double tol = 1e-3;

    auto [c1, m1] = hybrid_cmd(0.0, {M_PI / 2.0, 5.0}, HybridMode::BangBang, 1.0, p, r, tol);
    CHECK(m1 == HybridMode::BangBang);
    CHECK(c1.v == 0.0);
    CHECK(c1.omega == r.omega_max);

    auto [c2, m2] =
        hybrid_cmd(M_PI / 2.0 - 5e-4, {M_PI / 2.0, 5.0}, HybridMode::BangBang, 1.0, p, r, tol);
    CHECK(m2 == HybridMode::Continuous);

    // error grows again: mode stays continuous
    auto [c3, m3] = hybrid_cmd(0.0, {M_PI / 2.0, 5.0}, HybridMode::Continuous, 1.0, p, r, tol);
    CHECK(m3 == HybridMode::Continuous);
    CHECK(c3.omega > 0.0);
    (void)c2;
}

TEST_CASE("wrap_angle maps to (-pi, pi]") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(wrap_angle(2.0 * M_PI + 0.25) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(wrap_angle(-2.0 * M_PI - 0.25) == doctest::Approx(-0.25).epsilon(1e-12));
}
