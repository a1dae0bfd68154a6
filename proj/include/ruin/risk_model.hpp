#pragma once

#include <complex>

#include "ruin/phase_type.hpp"

namespace ruin {

enum class RegimeTag { Unprofitable, Profitable };

// Sign of the drift psi'(0+) decides which set of moment formulas applies.
struct Regime {
    RegimeTag tag;
    double drift;

    bool unprofitable() const { return tag == RegimeTag::Unprofitable; }
};

// Perturbed Cramer-Lundberg surplus: premium drift + Brownian part - compound Poisson claims.
// X_t = x + p t + sigma B_t - sum_{i<=N_t} S_i with S_i phase-type.
class RiskModel {
public:
    RiskModel(double premium, double sigma2, double lambda, PhaseType claims);

    double premium() const { return p_; }
    double sigma2() const { return sigma2_; }
    double lambda() const { return lambda_; }
    const PhaseType& claims() const { return claims_; }

    // Laplace exponent psi(z) = p z + sigma^2 z^2/2 - lambda (alpha (zI-T)^{-1} T 1 + 1).
    std::complex<double> psi(std::complex<double> z) const;
    double psi(double z) const;

    // Derivatives of order 1..3 in closed resolvent form.
    std::complex<double> psi_deriv(std::complex<double> z, int order) const;
    double psi_deriv(double z, int order) const;

    Regime classify() const;

private:
    void check_resolvent_pole(std::complex<double> z) const;

    double p_, sigma2_, lambda_;
    PhaseType claims_;
};

} // namespace ruin
