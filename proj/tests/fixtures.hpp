#pragma once

#include "ddtopt/model.hpp"

namespace ddtopt::testutil {

// Study initial conditions at alpha = beta = 2/3, one per partition piece
// the closed loop must traverse: Omega4 (the fully specified study state),
// Omega1, Omega2, the surfaces S5 and S6, and the line Lomega. All keep
// v(0) = 1 except the Lomega point, which requires v = 0.
//
//   state            H1      H2      label
//   (1,  4,    -2)   +4/3    -2      Omega4(v+,omega-)
//   (1, -2,    0.5)  -2.417  -1.063  Omega1
//   (1,  2,   -0.5)  +2.417  +1.063  Omega2
//   (1, -0.75,  1)    0      +1.5    S5(omega+)
//   (1, -2.25,  1)   -2       0      S6(v+)
//   (0, -0.75,  1)    0       0      Lomega(omega+)
inline constexpr ReducedState kStudyStates[6] = {
    {1.0, 4.0, -2.0},   {1.0, -2.0, 0.5},  {1.0, 2.0, -0.5},
    {1.0, -0.75, 1.0},  {1.0, -2.25, 1.0}, {0.0, -0.75, 1.0},
};

}  // namespace ddtopt::testutil
