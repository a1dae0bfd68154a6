#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "ruin/errors.hpp"
#include "ruin/roots.hpp"

using namespace ruin;
using testutil::golden_profitable;
using testutil::golden_unprofitable;

TEST_CASE("characteristic polynomial of the exponential model") {
    // p z^2 + (p gamma - lambda - q) z - q gamma, ascending coefficients
    RiskModel model = golden_unprofitable();
    const double q = 0.5, gamma = 2.0 / 3.0;
    std::vector<double> c = char_poly(model, q);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == doctest::Approx(-q * gamma).epsilon(1e-14));
    CHECK(c[1] == doctest::Approx(gamma - 1.0 - q).epsilon(1e-14));
    CHECK(c[2] == doctest::Approx(1.0).epsilon(1e-14));

    // q = 0 forces an exact zero constant term
    CHECK(char_poly(model, 0.0)[0] == 0.0);

    // sigma2 > 0 bumps the degree: (s2/2 z^2 + p z - (lambda+q))(z+gamma) - lambda gamma
    RiskModel perturbed(1.0, 2.0, 1.0, model.claims());
    std::vector<double> c3 = char_poly(perturbed, q);
    REQUIRE(c3.size() == 4);
    CHECK(c3[3] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c3[2] == doctest::Approx(1.0 + gamma).epsilon(1e-14));
    CHECK(c3[1] == doctest::Approx(gamma - 1.0 - q).epsilon(1e-14));
    CHECK(c3[0] == doctest::Approx(-q * gamma).epsilon(1e-14));
}

TEST_CASE("polynomialization preserves the psi roots") {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 6; ++trial) {
        RiskModel model = testutil::random_model(gen, trial % 2 == 0, trial % 2 ? 1.1 : 0.0);
        const double q = 0.4;
        std::vector<double> coeffs = char_poly(model, q);
        RootSystem sys = solve_roots(model, q);
        auto poly = [&](std::complex<double> z) {
            std::complex<double> acc = 0.0;
            for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) acc = acc * z + coeffs[i];
            return acc;
        };
        CHECK(std::abs(poly(sys.phi)) < 1e-8 * (1.0 + std::abs(coeffs.back())));
        for (auto r : sys.roots) CHECK(std::abs(poly(r)) < 1e-7 * (1.0 + std::abs(coeffs.back())));
    }
}

TEST_CASE("golden root systems") {
    RootSystem u = solve_roots(golden_unprofitable(), 0.0);
    CHECK(u.phi == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    REQUIRE(u.roots.size() == 1);
    CHECK(std::abs(u.roots[0]) == 0.0); // snapped exactly

    RootSystem p = solve_roots(golden_profitable(), 0.0);
    CHECK(p.phi == 0.0);
    REQUIRE(p.roots.size() == 1);
    CHECK(p.roots[0].real() == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
    CHECK(p.roots[0].imag() == 0.0);
}

TEST_CASE("root system invariants on random models") {
    std::mt19937_64 gen(29);
    for (int trial = 0; trial < 10; ++trial) {
        const bool unprof = trial % 2 == 0;
        const double s2 = trial % 3 == 0 ? 0.0 : 0.9;
        RiskModel model = testutil::random_model(gen, unprof, s2);
        for (double q : {0.0, 0.3, 1.0}) {
            RootSystem sys = solve_roots(model, q);
            CHECK(sys.residuals.size() == sys.roots.size());
            CHECK(sys.min_separation > 0.0);
            CHECK(sys.phi >= 0.0);
            if (q > 0.0) CHECK(sys.phi > 0.0);
            if (q == 0.0 && unprof) CHECK(sys.phi > 0.0);
            if (q == 0.0 && !unprof) CHECK(sys.phi == 0.0);
            const int expected = model.claims().dim() + (model.sigma2() > 0.0 ? 2 : 1);
            CHECK(static_cast<int>(sys.roots.size()) + 1 == expected);
            for (size_t i = 0; i < sys.roots.size(); ++i) {
                CHECK(sys.roots[i].real() <= 1e-12);
                if (i + 1 < sys.roots.size())
                    CHECK(sys.roots[i].real() >= sys.roots[i + 1].real() - 1e-12);
                // complex roots come in conjugate pairs
                if (sys.roots[i].imag() != 0.0) {
                    bool mate = false;
                    for (const auto& other : sys.roots)
                        if (std::abs(other - std::conj(sys.roots[i])) <
                            1e-9 * (1.0 + std::abs(other)))
                            mate = true;
                    CHECK(mate);
                }
                // the residual really is |psi(root) - q|
                CHECK(std::abs(model.psi(sys.roots[i]) - q) <=
                      1e-8 * std::max({1.0, q, std::abs(model.psi_deriv(sys.roots[i], 1))}));
            }
        }
    }
}

TEST_CASE("phi_of_q inverts psi on the right half-line") {
    std::mt19937_64 gen(37);
    for (int trial = 0; trial < 8; ++trial) {
        RiskModel model = testutil::random_model(gen, trial % 2 == 0, trial % 2 ? 1.4 : 0.0);
        for (double q : {0.1, 1.0, 10.0}) {
            const double phi = phi_of_q(model, q);
            CHECK(phi > 0.0);
            CHECK(std::abs(model.psi(phi) - q) < 1e-10 * std::max(1.0, q));
            CHECK(phi == doctest::Approx(solve_roots(model, q).phi).epsilon(1e-9));
        }
        if (trial % 2 == 0) { // unprofitable: Phi(0) is the strictly positive zero of psi
            const double phi0 = phi_of_q(model, 0.0);
            CHECK(phi0 > 0.0);
            CHECK(std::abs(model.psi(phi0)) < 1e-12);
        }
    }
    CHECK(phi_of_q(golden_profitable(), 0.0) == 0.0);
    CHECK_THROWS_AS(phi_of_q(golden_unprofitable(), -0.5), DomainError);
}

TEST_CASE("root_deriv matches finite differences of phi_of_q") {
    std::mt19937_64 gen(43);
    for (int trial = 0; trial < 6; ++trial) {
        RiskModel model = testutil::random_model(gen, trial % 2 == 0, trial % 2 ? 0.8 : 0.0);
        const double q = 0.7;
        const double root = phi_of_q(model, q);
        auto phi = [&](double qq) { return phi_of_q(model, qq); };
        CHECK(root_deriv(model, root, 1).real() ==
              doctest::Approx(testutil::fd_central(phi, q, 1e-5)).epsilon(1e-6));
        CHECK(root_deriv(model, root, 2).real() ==
              doctest::Approx(testutil::fd_second(phi, q, 1e-4)).epsilon(1e-4));
        auto d2 = [&](double qq) { return root_deriv(model, phi_of_q(model, qq), 2).real(); };
        CHECK(root_deriv(model, root, 3).real() ==
              doctest::Approx(testutil::fd_central(d2, q, 1e-5)).epsilon(1e-4));
    }
}

TEST_CASE("root_deriv refuses near-critical roots") {
    RiskModel model = golden_unprofitable();
    // psi'(theta*) = 0 at theta* = sqrt(2/3) - 2/3
    const double theta_star = std::sqrt(2.0 / 3.0) - 2.0 / 3.0;
    CHECK_THROWS_AS(root_deriv(model, theta_star, 1), NearCriticalRoot);
}

TEST_CASE("duplicated exponential rates are reported as a multiple root") {
    Eigen::VectorXd alpha(2);
    alpha << 0.5, 0.5;
    Eigen::MatrixXd T(2, 2);
    T << -1.0, 0.0, 0.0, -1.0; // hyperexponential with equal rates
    RiskModel model(1.2, 0.0, 0.8, PhaseType(alpha, T));
    CHECK_THROWS_AS(solve_roots(model, 0.3), MultipleRootDetected);
}

TEST_CASE("partial fractions of 1/(psi - q)") {
    std::mt19937_64 gen(53);
    for (int trial = 0; trial < 8; ++trial) {
        RiskModel model = testutil::random_model(gen, trial % 2 == 0, trial % 2 ? 1.6 : 0.0);
        for (double q : {0.0, 0.3, 1.0}) {
            RootSystem sys = solve_roots(model, q);
            std::vector<std::complex<double>> all;
            all.emplace_back(sys.phi, 0.0);
            all.insert(all.end(), sys.roots.begin(), sys.roots.end());
            for (double off : {0.7, 1.9}) {
                const std::complex<double> theta(sys.phi + off, 0.0);
                const std::complex<double> lhs = 1.0 / (model.psi(theta) - q);
                std::complex<double> rhs = 0.0;
                for (auto r : all) rhs += 1.0 / (model.psi_deriv(r, 1) * (theta - r));
                CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(lhs));
            }
        }
    }
}

TEST_CASE("solve_roots rejects negative q") {
    CHECK_THROWS_AS(solve_roots(golden_unprofitable(), -0.1), DomainError);
}
