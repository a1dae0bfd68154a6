#include "ruin/risk_model.hpp"

#include <cmath>
#include <string>

#include "ruin/errors.hpp"

namespace ruin {

using complexd = std::complex<double>;

RiskModel::RiskModel(double premium, double sigma2, double lambda, PhaseType claims)
    : p_(premium), sigma2_(sigma2), lambda_(lambda), claims_(std::move(claims)) {
    if (!(p_ > 0.0)) throw ConfigError("risk model: premium must be positive");
    if (sigma2_ < 0.0) throw ConfigError("risk model: sigma2 must be nonnegative");
    if (lambda_ < 0.0) throw ConfigError("risk model: lambda must be nonnegative");
    if (lambda_ == 0.0 && sigma2_ == 0.0)
        throw ConfigError("risk model: pure drift (lambda = 0, sigma2 = 0) is excluded");
}

void RiskModel::check_resolvent_pole(complexd z) const {
    for (int i = 0; i < claims_.dim(); ++i) {
        if (std::abs(z - claims_.T_eigenvalues()(i)) < 1e-10 * (1.0 + std::abs(z)))
            throw SingularResolvent("psi: argument within 1e-10 of an eigenvalue of T");
    }
}

complexd RiskModel::psi(complexd z) const {
    // 1 - E[e^{-zS}] = z alpha (zI-T)^{-1} 1 exactly (since alpha 1 = 1 and
    // -(zI-T)^{-1} T 1 = 1 - z (zI-T)^{-1} 1); factoring out z avoids the
    // cancellation of two O(1) terms that otherwise ruins psi near 0
    complexd claim_factor(0.0, 0.0);
    if (lambda_ > 0.0) {
        check_resolvent_pole(z);
        const int d = claims_.dim();
        const Eigen::MatrixXcd A =
            z * Eigen::MatrixXcd::Identity(d, d) - claims_.T().cast<complexd>();
        const Eigen::VectorXcd v = A.partialPivLu().solve(Eigen::VectorXcd::Ones(d));
        claim_factor = lambda_ * claims_.alpha().cast<complexd>().dot(v);
    }
    return z * (p_ + 0.5 * sigma2_ * z - claim_factor);
}

double RiskModel::psi(double z) const { return psi(complexd(z, 0.0)).real(); }

complexd RiskModel::psi_deriv(complexd z, int order) const {
    if (order < 1 || order > 3)
        throw UnsupportedOrder("psi_deriv: order " + std::to_string(order) + " not in 1..3");
    complexd claim_part(0.0, 0.0);
    if (lambda_ > 0.0) {
        check_resolvent_pole(z);
        const int d = claims_.dim();
        const Eigen::MatrixXcd A =
            z * Eigen::MatrixXcd::Identity(d, d) - claims_.T().cast<complexd>();
        const auto lu = A.partialPivLu();
        Eigen::VectorXcd v = lu.solve(-claims_.exit_rates().cast<complexd>());
        for (int i = 0; i < order; ++i) v = lu.solve(v);
        claim_part = claims_.alpha().cast<complexd>().dot(v);
    }
    switch (order) {
        case 1: return p_ + sigma2_ * z + lambda_ * claim_part;
        case 2: return sigma2_ - 2.0 * lambda_ * claim_part;
        default: return 6.0 * lambda_ * claim_part;
    }
}

double RiskModel::psi_deriv(double z, int order) const {
    return psi_deriv(complexd(z, 0.0), order).real();
}

Regime RiskModel::classify() const {
    const double drift = p_ - lambda_ * (lambda_ > 0.0 ? claims_.moment(1) : 0.0);
    if (std::abs(drift) < 1e-12 * std::max(1.0, p_))
        throw CriticalDrift("risk model: drift psi'(0+) is numerically zero; "
                            "every moment formula divides by it");
    return {drift < 0.0 ? RegimeTag::Unprofitable : RegimeTag::Profitable, drift};
}

} // namespace ruin
