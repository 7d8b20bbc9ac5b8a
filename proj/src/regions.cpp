#include "ddtopt/regions.hpp"

#include <cmath>

namespace ddtopt {

double h1(const ReducedState& q, const DerivedRates& rates) {
    return 2.0 * rates.alpha * q.theta + q.omega * std::abs(q.omega);
}

double h2(const ReducedState& q, const DerivedRates& rates) {
    return q.omega * std::abs(q.omega) / (2.0 * rates.alpha) + q.theta +
           q.omega * std::abs(q.v) / rates.beta;
}

bool in_omega3(const ReducedState& q, const DerivedRates& rates) {
    return q.omega * h1(q, rates) < 0.0;
}

const char* region_name(Region r) {
    switch (r) {
        case Region::Omega1: return "Omega1";
        case Region::Omega2: return "Omega2";
        case Region::Omega4: return "Omega4";
        case Region::S5: return "S5";
        case Region::S6: return "S6";
        case Region::Lv: return "Lv";
        case Region::Lomega: return "Lomega";
        case Region::Origin: return "Origin";
    }
    throw std::logic_error("unreachable");
}

std::string RegionLabel::to_string() const {
    std::string s = region_name(region);
    std::string subs;
    if (v_sign) subs += (*v_sign > 0 ? "v+" : "v-");
    if (omega_sign) {
        if (!subs.empty()) subs += ",";
        subs += (*omega_sign > 0 ? "omega+" : "omega-");
    }
    if (!subs.empty()) s += "(" + subs + ")";
    return s;
}

namespace {
int sign_of(double x) { return x >= 0.0 ? 1 : -1; }
}  // namespace

RegionLabel classify(const ReducedState& q, const DerivedRates& rates, const Tolerance& tol) {
    if (!(tol.eps_surface > 0.0)) throw std::invalid_argument("eps_surface must be > 0");
    const double e = tol.eps_surface;
    const double H1 = h1(q, rates);
    const double H2 = h2(q, rates);
    const bool h1_zero = std::abs(H1) <= e;
    const bool h2_zero = std::abs(H2) <= e;
    const bool v_zero = std::abs(q.v) <= e;
    const bool th_zero = std::abs(q.theta) <= e;
    const bool om_zero = std::abs(q.omega) <= e;

    // Origin takes precedence inside the eps cube: there the H bands need not
    // agree with the state bands and a surface label would claim a state that
    // is already at the goal for all practical purposes.
    if (v_zero && th_zero && om_zero) return {Region::Origin, {}, {}};
    if (H1 < -e && H2 < -e) return {Region::Omega1, {}, {}};
    if (H1 > e && H2 > e) return {Region::Omega2, {}, {}};
    if ((H1 > e && H2 < -e) || (H1 < -e && H2 > e))
        return {Region::Omega4, sign_of(q.v), sign_of(q.omega)};
    if (h1_zero && !h2_zero) return {Region::S5, {}, sign_of(q.omega)};
    if (h2_zero && !h1_zero) return {Region::S6, sign_of(q.v), {}};
    if (h1_zero && h2_zero && !v_zero && om_zero && th_zero)
        return {Region::Lv, sign_of(q.v), {}};
    if (h1_zero && h2_zero && !om_zero && v_zero)
        return {Region::Lomega, {}, sign_of(q.omega)};

    // Both H bands hit but the state matches neither line pattern, e.g.
    // |v| and |omega| both just above eps with their product below the band.
    throw AmbiguousRegion("ambiguous region at tolerance for (v=" + std::to_string(q.v) +
                          ", theta=" + std::to_string(q.theta) +
                          ", omega=" + std::to_string(q.omega) + "): H1=" + std::to_string(H1) +
                          " H2=" + std::to_string(H2) + " fall between the label bands");
}

}  // namespace ddtopt
