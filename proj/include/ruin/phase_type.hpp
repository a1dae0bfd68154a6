#pragma once

#include <Eigen/Dense>

#include "ruin/rng.hpp"

namespace ruin {

// exp(M*t) by scaling-and-squaring with a degree-13 Pade core.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& m, double t);

// Absorption time of a d-state Markov jump process: initial law alpha, subintensity T.
class PhaseType {
public:
    PhaseType(Eigen::VectorXd alpha, Eigen::MatrixXd T);

    int dim() const { return d_; }
    const Eigen::VectorXd& alpha() const { return alpha_; }
    const Eigen::MatrixXd& T() const { return T_; }
    const Eigen::VectorXd& exit_rates() const { return exit_; }
    const Eigen::VectorXcd& T_eigenvalues() const { return eig_; }

    double cdf(double z) const;
    double pdf(double z) const;
    double moment(int n) const;

    // Smallest z with cdf(z) > 1 - eps, located by doubling then bisection.
    double tail_cutoff(double eps = 1e-12) const;

    // Exact sample: walk the absorbing chain.
    double sample(Xoshiro256pp& rng) const;

    bool is_exponential() const { return d_ == 1; }
    double rate() const;

private:
    int d_;
    Eigen::VectorXd alpha_;
    Eigen::MatrixXd T_;
    Eigen::VectorXd exit_;   // -T*1, rate of absorption per phase
    Eigen::VectorXcd eig_;   // eigenvalues of T, all with negative real part
};

} // namespace ruin
