#pragma once

#include <sys/wait.h>

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "ruin/phase_type.hpp"
#include "ruin/risk_model.hpp"

namespace testutil {

// Subintensity with diagonally dominant rows, so eigenvalue real parts are
// strictly negative and every phase has positive exit rate.
inline ruin::PhaseType random_phase_type(std::mt19937_64& gen, int d) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Eigen::VectorXd alpha(d);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        alpha(i) = u(gen);
        total += alpha(i);
    }
    alpha /= total;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        double off = 0.0;
        for (int j = 0; j < d; ++j) {
            if (j == i) continue;
            T(i, j) = 0.3 * u(gen);
            off += T(i, j);
        }
        T(i, i) = -(off + 0.2 + u(gen));
    }
    return ruin::PhaseType(alpha, T);
}

inline ruin::RiskModel random_model(std::mt19937_64& gen, bool unprofitable, double sigma2) {
    const int d = 1 + static_cast<int>(gen() % 3);
    ruin::PhaseType claims = random_phase_type(gen, d);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double lambda = 0.5 + u(gen);
    const double load = unprofitable ? 0.4 + 0.4 * u(gen) : 1.2 + 0.8 * u(gen);
    return ruin::RiskModel(lambda * claims.moment(1) * load, sigma2, lambda, claims);
}

template <class F>
double fd_central(F f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <class F>
double fd_second(F f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

// Runs through the shell with stderr folded into stdout.
inline CommandResult run_command(const std::string& cmd) {
    CommandResult result;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return result;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    os << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// p=1, lambda=1, exponential(2/3), sigma2=0: E_x[tau] = 2x+3, Var_x = 36x+45.
inline ruin::RiskModel golden_unprofitable() {
    Eigen::VectorXd alpha(1);
    alpha << 1.0;
    Eigen::MatrixXd T(1, 1);
    T << -2.0 / 3.0;
    return ruin::RiskModel(1.0, 0.0, 1.0, ruin::PhaseType(alpha, T));
}

// Same claims with p=2: E_x[tau|ruin] = 1.5x+3, Var = 36x+63, P_x = 0.75 e^{-x/6}.
inline ruin::RiskModel golden_profitable() {
    Eigen::VectorXd alpha(1);
    alpha << 1.0;
    Eigen::MatrixXd T(1, 1);
    T << -2.0 / 3.0;
    return ruin::RiskModel(2.0, 0.0, 1.0, ruin::PhaseType(alpha, T));
}

inline std::string golden_unprofitable_json() {
    return "{\"p\": 1.0, \"sigma2\": 0.0, \"lambda\": 1.0,\n"
           " \"claims\": {\"kind\": \"exponential\", \"gamma\": 0.66666666666666663}}\n";
}

inline std::string golden_profitable_json() {
    return "{\"p\": 2.0, \"sigma2\": 0.0, \"lambda\": 1.0,\n"
           " \"claims\": {\"kind\": \"exponential\", \"gamma\": 0.66666666666666663}}\n";
}

} // namespace testutil
