#include "ruin/model_config.hpp"

#include <Eigen/Dense>
#include <fstream>

#include "json.hpp"
#include "ruin/errors.hpp"

namespace ruin {

namespace {

double require_number(const nlohmann::json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigError(where + ": missing or non-numeric field \"" + key + "\"");
    return j[key].get<double>();
}

PhaseType parse_claims(const nlohmann::json& j, const std::string& where) {
    if (!j.contains("claims") || !j["claims"].is_object())
        throw ConfigError(where + ": missing \"claims\" object");
    const nlohmann::json& c = j["claims"];
    const std::string kind = c.value("kind", "");
    if (kind == "exponential") {
        const double gamma = require_number(c, "gamma", where + ".claims");
        if (!(gamma > 0.0)) throw ConfigError(where + ".claims: gamma must be positive");
        Eigen::VectorXd alpha(1);
        alpha << 1.0;
        Eigen::MatrixXd T(1, 1);
        T << -gamma;
        return PhaseType(alpha, T);
    }
    if (kind == "phase-type") {
        if (!c.contains("alpha") || !c["alpha"].is_array())
            throw ConfigError(where + ".claims: missing \"alpha\" array");
        if (!c.contains("T") || !c["T"].is_array())
            throw ConfigError(where + ".claims: missing \"T\" array of rows");
        const auto& ja = c["alpha"];
        const auto& jt = c["T"];
        const int d = static_cast<int>(ja.size());
        if (d == 0) throw ConfigError(where + ".claims: alpha is empty");
        if (static_cast<int>(jt.size()) != d)
            throw ConfigError(where + ".claims: T has " + std::to_string(jt.size()) +
                              " rows for " + std::to_string(d) + " phases");
        Eigen::VectorXd alpha(d);
        Eigen::MatrixXd T(d, d);
        for (int i = 0; i < d; ++i) {
            if (!ja[i].is_number())
                throw ConfigError(where + ".claims: alpha[" + std::to_string(i) +
                                  "] is not a number");
            alpha(i) = ja[i].get<double>();
            if (!jt[i].is_array() || static_cast<int>(jt[i].size()) != d)
                throw ConfigError(where + ".claims: T[" + std::to_string(i) +
                                  "] is not a row of length " + std::to_string(d));
            for (int k = 0; k < d; ++k) {
                if (!jt[i][k].is_number())
                    throw ConfigError(where + ".claims: T[" + std::to_string(i) + "][" +
                                      std::to_string(k) + "] is not a number");
                T(i, k) = jt[i][k].get<double>();
            }
        }
        return PhaseType(alpha, T);
    }
    throw ConfigError(where + ".claims: kind must be \"exponential\" or \"phase-type\"");
}

} // namespace

RiskModel load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(path + ": top level must be an object");
    const double p = require_number(j, "p", path);
    const double sigma2 = require_number(j, "sigma2", path);
    const double lambda = require_number(j, "lambda", path);
    try {
        return RiskModel(p, sigma2, lambda, parse_claims(j, path));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace ruin
