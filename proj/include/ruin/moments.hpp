#pragma once

#include <vector>

#include "ruin/risk_model.hpp"

namespace ruin {

enum class Method { General, PhaseTypeClosed, ExponentialClosed, Convolution };

const char* method_name(Method m);

// Conditional ruin-time moments at initial capital x: mean = E_x[tau | ruin],
// second = E_x[tau^2 | ruin], variance = second - mean^2. In the unprofitable
// regime ruin is certain and ruin_prob is exactly 1. When computed with
// k = 1 the second moment and variance are NaN.
struct MomentReport {
    double x = 0.0;
    Regime regime;
    double ruin_prob = 0.0;
    double mean = 0.0;
    double second = 0.0;
    double variance = 0.0;
    Method method = Method::General;
};

// values[l] = eta^(l)(0+) where eta(q) = q/Phi(q). Unprofitable: eta(0+) = 0;
// profitable: eta(0+) = psi'(0+).
struct EtaDerivatives {
    std::vector<double> values;
};

// Partial Bell polynomial B_{l,j}(args[0..l-j]) via the standard recurrence
// B_{l,j} = sum_{i=1}^{l-j+1} C(l-1, i-1) args[i-1] B_{l-i, j-1}.
double bell_partial(int l, int j, const std::vector<double>& args);

// eta and its first k_max derivatives at 0+. Unprofitable:
// eta^(k)(0+) = k * d^{k-1}/dq^{k-1} (1/Phi)(0+), expanded with Bell
// polynomials in the q-derivatives of Phi at Phi(0); profitable:
// eta^(l)(0+) = sum_j psi^{(j+1)}(0+)/(j+1) B_{l,j}(Phi'(0+), ...). The
// Phi-derivatives come from inverting psi(Phi(q)) = q order by order, so
// every order is exact.
EtaDerivatives eta_derivs(const RiskModel& model, int k_max);

// P_x(ruin): 1 in the unprofitable regime, else -psi'(0+) sum_i
// e^{phi_i x}/psi'(phi_i) over the strictly negative roots of psi(z) = 0
// (the stable form of 1 - psi'(0+) W^{(0)}(x)), clamped to [0,1].
double ruin_probability(const RiskModel& model, double x);

// Scale-function route: combines W^{(0)}, its antiderivative and its
// q-derivatives at q = 0+ with the eta derivatives. Coefficient groups that
// cancel analytically (the Phi(0)-root terms in the unprofitable regime, the
// free polynomial in the profitable one) are removed symbolically so large-x
// evaluation stays accurate.
MomentReport moments_general(const RiskModel& model, double x, int k = 2);

// Explicit per-root forms for phase-type claims: the linear/quadratic
// polynomial in x plus exponentially decaying remainder (unprofitable), or
// the ratio of root sums against D(x) = sum e^{phi_i x}/psi'(phi_i)
// (profitable, evaluated with a common exponential factor removed).
MomentReport moments_phase_type(const RiskModel& model, double x, int k = 2);

// Fully closed forms for exponential claims (no root solver); requires a
// one-phase claim distribution.
MomentReport moments_exponential(const RiskModel& model, double x, int k = 2);

// Grid-convolution route: (-1)^k k! (int_0^x (W0)*k - sum_{l=0}^k
// eta^(l)(0+)/l! (W0)*(k-l+1)(x)) / P_x on a trapezoid grid. The step is
// shrunk so the grid lands exactly on x. k is capped at 6.
double moments_convolution(const RiskModel& model, double x, int k, double h);

// Laplace transform in x of E_x[tau^k] (unprofitable) or of
// E_x[tau^k | ruin] P_x(ruin) (profitable):
//   (-1)^k k! (1/(beta psi(beta)^k) - [psi'(0+)/psi(beta)^{k+1}]_{profitable}
//              - sum_{l=1}^k eta^(l)(0+)/(l! psi(beta)^{k-l+1})).
// In the unprofitable regime beta = Phi(0) is a removable singularity; a
// |beta - Phi(0)| < 1e-8 guard band dispatches to the limiting value
// (-1)^k eta^{(k+1)}(0+)/(k+1).
double laplace_uk(const RiskModel& model, int k, double beta);

// lim_{x->inf} E_x[tau^k]/x^k = 1/|psi'(0+)|^k (unprofitable); the profitable
// product E_x[tau^k | ruin] P_x(ruin) tends to 0, reported as 0.
double asymptotic_slope(const RiskModel& model, int k);

} // namespace ruin
