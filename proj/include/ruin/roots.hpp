#pragma once

#include <complex>
#include <vector>

#include "ruin/risk_model.hpp"

namespace ruin {

// Solutions of psi(z) = q. `phi` is the unique nonnegative real solution
// Phi(q); `roots` holds the remaining solutions sorted by nonincreasing real
// part (all have Re <= 0), with residuals[i] = |psi(roots[i]) - q| after
// Newton polishing. min_separation is the smallest pairwise distance over
// {phi} union roots. Counting both, there are d+2 solutions when sigma2 > 0
// and d+1 when sigma2 = 0 (d = claim phase count), provided no root collides
// with an eigenvalue of T (we refuse such models, see solve_roots).
struct RootSystem {
    double q = 0.0;
    double phi = 0.0;
    std::vector<std::complex<double>> roots;
    std::vector<double> residuals;
    double min_separation = 0.0;
};

// Coefficients (ascending powers) of (psi(z) - q) * det(zI - T), a real
// polynomial of degree d+2 (sigma2 > 0) or d+1 (sigma2 = 0). det(zI - T) and
// the adjugate expansion of alpha (zI-T)^{-1} T 1 come from the
// Faddeev-LeVerrier recurrence. For q = 0 the constant term is exactly zero.
std::vector<double> char_poly(const RiskModel& model, double q);

// All solutions of psi(z) = q via companion-matrix eigenvalues of char_poly,
// each polished by Newton iteration on psi(z) - q itself. Throws
// MultipleRootDetected if a candidate collides with an eigenvalue of T (the
// polynomialization shares a factor and simplicity cannot be certified) or if
// two solutions come closer than 1e-6 * (1 + |z|); throws ResidualTooLarge if
// any polished residual exceeds 1e-8 * max(1, q, |psi'(z)|).
RootSystem solve_roots(const RiskModel& model, double q);

// Phi(q) = largest theta >= 0 with psi(theta) = q, by safeguarded Newton on
// the increasing branch of psi. Matches solve_roots().phi to 1e-10.
double phi_of_q(const RiskModel& model, double q);

// d^order phi / dq^order for a simple solution phi of psi(z) = q, by implicit
// differentiation:
//   phi'   = 1/psi'(phi)
//   phi''  = -psi''(phi)/psi'(phi)^3
//   phi''' = 3 psi''(phi)^2/psi'(phi)^5 - psi'''(phi)/psi'(phi)^4
// Throws NearCriticalRoot if |psi'(phi)| < 1e-10.
std::complex<double> root_deriv(const RiskModel& model, std::complex<double> root, int order);

} // namespace ruin
