#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "ruin/risk_model.hpp"
#include "ruin/roots.hpp"

namespace ruin {

// One exponential-polynomial term e^{root x} (c0 + c1 x + c2 x^2).
struct ExpTerm {
    std::complex<double> root;
    std::complex<double> c0, c1, c2;
};

// A finite sum of ExpTerms plus a free polynomial. W^{(q)}, its
// antiderivative, its q-derivatives, and the moment formulas built from them
// are all of this shape; keeping the per-root coefficients symbolic lets
// callers cancel analytically-zero groups instead of subtracting huge
// near-equal exponentials at large x.
class Expansion {
  public:
    // root == 0 folds into the free polynomial (the term is a polynomial)
    void add_term(std::complex<double> root, std::complex<double> c0,
                  std::complex<double> c1 = 0.0, std::complex<double> c2 = 0.0);
    void add_poly(int power, std::complex<double> coeff);
    void add(const Expansion& other, std::complex<double> weight); // this += weight * other

    Expansion antiderivative() const; // x |-> integral over [0, x]

    // Removes every term whose root lies within 1e-9 (1+|root|) of `root` and
    // returns the largest removed coefficient magnitude. Used after a linear
    // combination whose coefficients at `root` cancel analytically.
    double remove_root(std::complex<double> root);
    void clear_poly();
    std::array<std::complex<double>, 3> coeffs_at(std::complex<double> root) const;
    double poly_max() const; // largest |coefficient| of the free polynomial

    double eval(double x) const;                      // throws on imaginary residue
    double eval_damped(double x, double shift) const; // e^{-shift x} * value, overflow-safe
    double max_root_real() const;                     // largest Re(root) among terms

    const std::vector<ExpTerm>& terms() const { return terms_; }
    const std::vector<std::complex<double>>& poly() const { return poly_; }

  private:
    std::vector<ExpTerm> terms_;
    std::vector<std::complex<double>> poly_; // ascending powers of x
};

// Root system for psi(z) = q with psi', psi'', psi''' cached at every root;
// index 0 is Phi(q), indices 1..n are the nonpositive-real-part roots.
class ScaleForms {
  public:
    ScaleForms(const RiskModel& model, double q);

    const RootSystem& system() const { return sys_; }
    int n_all() const { return static_cast<int>(all_.size()); }
    std::complex<double> root(int i) const { return all_[i]; }
    std::complex<double> dpsi(int i, int order) const { return derivs_[i][order - 1]; }

    Expansion w() const;          // W^{(q)}(x) = sum e^{phi_i x}/psi'(phi_i)
    Expansion w_int() const;      // integral of W^{(q)} over [0, x]
    Expansion w_dq(int order) const; // term-wise d/dq, order 1 or 2

  private:
    RootSystem sys_;
    std::vector<std::complex<double>> all_;
    std::vector<std::array<std::complex<double>, 3>> derivs_;
};

// Uniformly spaced samples of a function on {0, h, ..., Nh}.
struct GridFunction {
    double h = 0.0;
    std::vector<double> values;
};

double scale_w(const RiskModel& model, double q, double x);     // 0 for x < 0
double scale_w_int(const RiskModel& model, double q, double x); // integral over [0, x]
double scale_w_dq(const RiskModel& model, double q, double x, int order);

// (W^{(0)})^{*k} for k = 1..k_max on a grid of step h covering [0, x_max],
// by iterated trapezoid convolution (half weights at the endpoints absorb
// the jump W^{(0)}(0) = 1/p when sigma2 = 0).
std::vector<GridFunction> conv_powers(const RiskModel& model, double x_max, double h, int k_max);

// Step so the dominant exponential scale of W^{(0)} spans >= 200 grid points.
double default_grid_step(const RiskModel& model);

// {adaptive quadrature of e^{-beta x} W^{(q)}(x) plus analytic tail,
//  1/(psi(beta) - q)}. Throws BetaTooSmall if beta <= Phi(q).
std::pair<double, double> laplace_check(const RiskModel& model, double q, double beta);

} // namespace ruin
