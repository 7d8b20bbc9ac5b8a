#pragma once

#include <string>

#include "ddtopt/model.hpp"

namespace ddtopt {

// Reads RobotParams from a JSON config file. Keys: r, b, m, J_r, u_m,
// phi_dot_max, c1, c2 (all required), optional alpha and beta overrides.
RobotParams load_params(const std::string& path);

// Parses the same schema from a JSON string.
RobotParams parse_params_json(const std::string& text);

std::string params_to_json(const RobotParams& params);

}  // namespace ddtopt
