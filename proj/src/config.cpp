#include "ddtopt/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ddtopt {

namespace {

RobotParams from_json(const nlohmann::json& j) {
    RobotParams p;
    auto get = [&](const char* key) -> double {
        if (!j.contains(key))
            throw std::invalid_argument(std::string("config missing key '") + key + "'");
        if (!j.at(key).is_number())
            throw std::invalid_argument(std::string("config key '") + key + "' must be a number");
        return j.at(key).get<double>();
    };
    p.r = get("r");
    p.b = get("b");
    p.m = get("m");
    p.J_r = get("J_r");
    p.u_m = get("u_m");
    p.phi_dot_max = get("phi_dot_max");
    p.c1 = get("c1");
    p.c2 = get("c2");
    if (j.contains("alpha")) p.alpha_override = j.at("alpha").get<double>();
    if (j.contains("beta")) p.beta_override = j.at("beta").get<double>();
    p.validate();
    return p;
}

}  // namespace

RobotParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

RobotParams parse_params_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
}

std::string params_to_json(const RobotParams& params) {
    nlohmann::json j;
    j["r"] = params.r;
    j["b"] = params.b;
    j["m"] = params.m;
    j["J_r"] = params.J_r;
    j["u_m"] = params.u_m;
    j["phi_dot_max"] = params.phi_dot_max;
    j["c1"] = params.c1;
    j["c2"] = params.c2;
    if (params.alpha_override) j["alpha"] = *params.alpha_override;
    if (params.beta_override) j["beta"] = *params.beta_override;
    return j.dump(2);
}

}  // namespace ddtopt
