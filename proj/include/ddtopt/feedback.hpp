#pragma once

#include "ddtopt/model.hpp"
#include "ddtopt/regions.hpp"
#include "ddtopt/synthesis.hpp"

namespace ddtopt {

struct TorqueCommand {
    double u1 = 0.0;
    double u2 = 0.0;
};

// State feedback realizing the chosen synthesis: the torque pair of the first
// phase of the optimal plan, (0, 0) at the origin. Total on the state space;
// a tolerance tie falls back to strict-sign classification.
TorqueCommand u_fb(const ReducedState& q, const DerivedRates& rates, const RobotParams& params,
                   SynthesisFlavor flavor = SynthesisFlavor::Gamma1, const Tolerance& tol = {});

}  // namespace ddtopt
