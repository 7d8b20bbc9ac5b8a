#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "ddtopt/model.hpp"

namespace ddtopt {

// Switching surfaces partitioning the reduced state space.
//   H1 = 2*alpha*theta + omega*|omega|
//   H2 = omega*|omega|/(2*alpha) + theta + omega*|v|/beta
double h1(const ReducedState& q, const DerivedRates& rates);
double h2(const ReducedState& q, const DerivedRates& rates);

// Omega3 predicate omega*H1 < 0. Overlaps Omega1/Omega2, so it is not a
// partition label; the planner uses it to gate C2b candidates.
bool in_omega3(const ReducedState& q, const DerivedRates& rates);

enum class Region { Omega1, Omega2, Omega4, S5, S6, Lv, Lomega, Origin };

const char* region_name(Region r);

struct RegionLabel {
    Region region = Region::Origin;
    // Sign refinements, present exactly for Omega4 (both), S5 (omega),
    // S6 (v), Lv (v), Lomega (omega).
    std::optional<int> v_sign;
    std::optional<int> omega_sign;

    std::string to_string() const;
};

struct Tolerance {
    double eps_surface = 1e-9;  // half-width of the band where H1/H2 count as zero
};

// Raised when the eps bands leave a state with zero or two candidate labels.
class AmbiguousRegion : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Assigns exactly one partition label; throws AmbiguousRegion when the
// tolerance bands fail to single one out.
RegionLabel classify(const ReducedState& q, const DerivedRates& rates,
                     const Tolerance& tol = {});

}  // namespace ddtopt
