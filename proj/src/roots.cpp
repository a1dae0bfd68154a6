#include "ruin/roots.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "ruin/errors.hpp"

namespace ruin {

using complexd = std::complex<double>;

std::vector<double> char_poly(const RiskModel& model, double q) {
    const double p = model.premium();
    const double s2 = model.sigma2();
    const double lambda = model.lambda();

    std::vector<double> coeffs;
    if (lambda == 0.0) {
        // pure Brownian branch: psi - q is already a polynomial
        coeffs = {-q, p, 0.5 * s2};
    } else {
        const auto& ph = model.claims();
        const int d = ph.dim();
        const Eigen::MatrixXd& T = ph.T();
        const Eigen::VectorXd Tone = -ph.exit_rates();

        // Faddeev-LeVerrier: det(zI-T) = sum chi[k] z^k (monic) and
        // adj(zI-T) = sum_{k=1..d} M_k z^{d-k} with M_1 = I,
        // M_{k+1} = T M_k + chi[d-k] I, chi[d-k-1] = -tr(T M_{k+1})/(k+1).
        std::vector<double> chi(d + 1, 0.0);
        chi[d] = 1.0;
        std::vector<double> adj_num(d, 0.0); // alpha adj(zI-T) T1, ascending
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(d, d);
        for (int k = 1; k <= d; ++k) {
            adj_num[d - k] = ph.alpha().dot(M * Tone);
            const Eigen::MatrixXd TM = T * M;
            chi[d - k] = -TM.trace() / static_cast<double>(k);
            if (k < d) M = TM + chi[d - k] * Eigen::MatrixXd::Identity(d, d);
        }

        // (0.5 s2 z^2 + p z - (lambda+q)) * chi(z) - lambda * adj_num(z)
        const int deg = d + (s2 > 0.0 ? 2 : 1);
        coeffs.assign(deg + 1, 0.0);
        for (int k = 0; k <= d; ++k) {
            coeffs[k] += -(lambda + q) * chi[k];
            coeffs[k + 1] += p * chi[k];
            if (s2 > 0.0) coeffs[k + 2] += 0.5 * s2 * chi[k];
        }
        for (int k = 0; k < d; ++k) coeffs[k] -= lambda * adj_num[k];
    }
    if (q == 0.0) coeffs[0] = 0.0; // psi(0) = 0 exactly
    return coeffs;
}

namespace {

std::vector<complexd> companion_roots(const std::vector<double>& coeffs) {
    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && coeffs[deg] == 0.0) --deg;
    if (deg < 1) throw ResidualTooLarge("solve_roots: degenerate polynomial");
    if (deg == 1) return {complexd(-coeffs[0] / coeffs[1], 0.0)};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
    std::vector<complexd> out(deg);
    for (int i = 0; i < deg; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

double residual_scale(const RiskModel& model, complexd z, double q) {
    double dpsi = 1.0;
    try {
        dpsi = std::abs(model.psi_deriv(z, 1));
    } catch (const SingularResolvent&) {
    }
    return std::max({1.0, q, dpsi});
}

complexd polish(const RiskModel& model, complexd z, double q) {
    for (int it = 0; it < 50; ++it) {
        complexd f, df;
        try {
            f = model.psi(z) - q;
            df = model.psi_deriv(z, 1);
        } catch (const SingularResolvent&) {
            break; // wandered into a pole; keep the last iterate
        }
        if (std::abs(f) < 1e-14 * residual_scale(model, z, q)) break;
        if (std::abs(df) < 1e-300) break;
        const complexd step = f / df;
        z -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(z))) break;
    }
    return z;
}

} // namespace

RootSystem solve_roots(const RiskModel& model, double q) {
    if (q < 0.0) throw DomainError("solve_roots: q must be nonnegative");
    std::vector<complexd> cand = companion_roots(char_poly(model, q));

    // A candidate sitting on an eigenvalue of T means (psi - q) * det(zI - T)
    // shares a factor with det(zI - T): the representation is degenerate
    // (e.g. duplicated rates) and root simplicity cannot be certified.
    if (model.lambda() > 0.0) {
        const auto& eigs = model.claims().T_eigenvalues();
        for (const complexd& z : cand)
            for (int i = 0; i < eigs.size(); ++i)
                if (std::abs(z - eigs(i)) < 1e-7 * (1.0 + std::abs(z)))
                    throw MultipleRootDetected(
                        "solve_roots: root collides with an eigenvalue of T; "
                        "the phase-type representation is degenerate");
    }

    for (complexd& z : cand) z = polish(model, z, q);

    // enforce exact conjugate symmetry; snap near-real roots to the axis
    std::vector<bool> used(cand.size(), false);
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (used[i]) continue;
        if (std::abs(cand[i].imag()) < 1e-9 * (1.0 + std::abs(cand[i].real()))) {
            cand[i] = complexd(cand[i].real(), 0.0);
            used[i] = true;
            continue;
        }
        std::size_t mate = cand.size();
        double best = 1e300;
        for (std::size_t j = i + 1; j < cand.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(cand[i] - std::conj(cand[j]));
            if (dist < best) { best = dist; mate = j; }
        }
        if (mate == cand.size() || best > 1e-6 * (1.0 + std::abs(cand[i])))
            throw ResidualTooLarge("solve_roots: unpaired complex root " +
                                   std::to_string(cand[i].real()) + "+" +
                                   std::to_string(cand[i].imag()) + "i");
        const complexd avg = 0.5 * (cand[i] + std::conj(cand[mate]));
        cand[i] = avg;
        cand[mate] = std::conj(avg);
        used[i] = used[mate] = true;
    }
    for (complexd& z : cand)
        if (std::abs(z) < 1e-12) z = complexd(0.0, 0.0);

    for (const complexd& z : cand) {
        const double res = std::abs(model.psi(z) - q);
        if (!(res < 1e-8 * residual_scale(model, z, q)))
            throw ResidualTooLarge("solve_roots: |psi(z)-q| = " + std::to_string(res) +
                                   " after polishing at Re z = " + std::to_string(z.real()));
    }

    RootSystem sys;
    sys.q = q;
    sys.min_separation = 1e300;
    for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = i + 1; j < cand.size(); ++j) {
            const double dist = std::abs(cand[i] - cand[j]);
            sys.min_separation = std::min(sys.min_separation, dist);
            if (dist < 1e-6 * (1.0 + std::max(std::abs(cand[i]), std::abs(cand[j]))))
                throw MultipleRootDetected("solve_roots: roots separated by only " +
                                           std::to_string(dist));
        }

    auto it = std::max_element(cand.begin(), cand.end(),
                               [](complexd a, complexd b) { return a.real() < b.real(); });
    if (it->imag() != 0.0)
        throw ResidualTooLarge("solve_roots: rightmost root is not real");
    if (it->real() < -1e-12)
        throw ResidualTooLarge("solve_roots: rightmost root is negative");
    sys.phi = std::max(it->real(), 0.0);
    cand.erase(it);

    std::sort(cand.begin(), cand.end(), [](complexd a, complexd b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    sys.roots = std::move(cand);
    sys.residuals.reserve(sys.roots.size());
    for (const complexd& z : sys.roots) sys.residuals.push_back(std::abs(model.psi(z) - q));
    return sys;
}

double phi_of_q(const RiskModel& model, double q) {
    if (q < 0.0) throw DomainError("phi_of_q: q must be nonnegative");
    const Regime regime = model.classify();
    if (q == 0.0 && !regime.unprofitable()) return 0.0;

    // locate the convexity minimum theta* (psi' is increasing on [0, inf))
    double lo = 0.0;
    if (regime.unprofitable()) {
        double hi = 1.0;
        while (model.psi_deriv(hi, 1) < 0.0) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (model.psi_deriv(mid, 1) < 0.0 ? lo : hi) = mid;
            if (hi - lo < 1e-14 * (1.0 + hi)) break;
        }
        lo = hi; // psi' >= 0 from here on
    }

    double hi = std::max(1.0, 2.0 * lo);
    while (model.psi(hi) < q) hi *= 2.0;

    double theta = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = model.psi(theta) - q;
        (f < 0.0 ? lo : hi) = theta;
        const double df = model.psi_deriv(theta, 1);
        double next = (df > 0.0) ? theta - f / df : theta;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - theta) < 1e-15 * (1.0 + std::abs(theta))) { theta = next; break; }
        theta = next;
    }
    return theta;
}

std::complex<double> root_deriv(const RiskModel& model, complexd root, int order) {
    if (order < 1 || order > 3)
        throw UnsupportedOrder("root_deriv: order " + std::to_string(order) + " not in 1..3");
    const complexd d1 = model.psi_deriv(root, 1);
    if (std::abs(d1) < 1e-10)
        throw NearCriticalRoot("root_deriv: |psi'(root)| < 1e-10, implicit derivative blows up");
    if (order == 1) return 1.0 / d1;
    const complexd d2 = model.psi_deriv(root, 2);
    if (order == 2) return -d2 / (d1 * d1 * d1);
    const complexd d3 = model.psi_deriv(root, 3);
    return 3.0 * d2 * d2 / std::pow(d1, 5) - d3 / std::pow(d1, 4);
}

} // namespace ruin
