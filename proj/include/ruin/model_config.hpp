#pragma once

#include <string>

#include "ruin/risk_model.hpp"

namespace ruin {

// Builds a RiskModel from a JSON file of the shape
//   {"p": <number>, "sigma2": <number>, "lambda": <number>,
//    "claims": {"kind": "exponential", "gamma": <number>}}
// or with claims {"kind": "phase-type", "alpha": [...], "T": [[...], ...]}.
// Throws ConfigError naming the file and the offending field.
RiskModel load_model_config(const std::string& path);

} // namespace ruin
