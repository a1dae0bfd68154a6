#include "ruin/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "ruin/errors.hpp"
#include "ruin/roots.hpp"
#include "ruin/scale.hpp"

namespace ruin {

using complexd = std::complex<double>;

const char* method_name(Method m) {
    switch (m) {
        case Method::General: return "general";
        case Method::PhaseTypeClosed: return "phase-type closed form";
        case Method::ExponentialClosed: return "exponential closed form";
        case Method::Convolution: return "convolution";
    }
    return "unknown";
}

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// psi^{(n)}(z) for any n >= 1 at real z; orders above 3 via the resolvent
// power form psi^{(n)}(z) = -lambda (-1)^n n! alpha (zI-T)^{-(n+1)} T 1.
double psi_deriv_n(const RiskModel& model, double z, int n) {
    if (n <= 3) return model.psi_deriv(z, n);
    if (model.lambda() == 0.0) return 0.0;
    const auto& ph = model.claims();
    const int d = ph.dim();
    const Eigen::MatrixXd A = z * Eigen::MatrixXd::Identity(d, d) - ph.T();
    const auto lu = A.partialPivLu();
    Eigen::VectorXd v = lu.solve(Eigen::VectorXd(-ph.exit_rates()));
    for (int i = 0; i < n; ++i) v = lu.solve(v);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return -model.lambda() * sign * factorial(n) * ph.alpha().dot(v);
}

// q-derivatives of the root branch of psi(phi(q)) = q through `anchor`
// (Phi(0) in the unprofitable regime, 0 in the profitable one): order-by-
// order inversion gives phi' = 1/psi'(anchor) and, for m >= 2,
// phi^{(m)} = -(sum_{j=2}^m psi^{(j)}(anchor) B_{m,j}(phi',...))/psi'(anchor).
std::vector<double> phi_q_derivs(const RiskModel& model, double anchor, int n_max) {
    std::vector<double> dpsi(n_max + 1, 0.0);
    for (int j = 1; j <= n_max; ++j) dpsi[j] = psi_deriv_n(model, anchor, j);
    std::vector<double> d(n_max + 1, 0.0);
    d[1] = 1.0 / dpsi[1];
    for (int m = 2; m <= n_max; ++m) {
        double s = 0.0;
        for (int j = 2; j <= m; ++j) {
            const std::vector<double> args(d.begin() + 1, d.begin() + 1 + (m - j + 1));
            s += dpsi[j] * bell_partial(m, j, args);
        }
        d[m] = -s / dpsi[1];
    }
    return d;
}

double coeff_max(const std::array<complexd, 3>& c) {
    return std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])});
}

// removes the exp-terms at `root` after verifying their combined coefficients
// actually cancelled (|residual| <= 1e-8 * ref)
void cancel_root_checked(Expansion& e, complexd root, double ref) {
    const double mag = coeff_max(e.coeffs_at(root));
    if (mag > 1e-8 * std::max(ref, 1e-300))
        throw DomainError("moment assembly: coefficients at a root that should cancel "
                          "left a residual of " + std::to_string(mag));
    e.remove_root(root);
}

void clear_poly_checked(Expansion& e, double ref) {
    const double mag = e.poly_max();
    if (mag > 1e-8 * std::max(ref, 1e-300))
        throw DomainError("moment assembly: free polynomial that should cancel left a "
                          "residual of " + std::to_string(mag));
    e.clear_poly();
}

double clamp01(const char* who, double value) {
    const double clamped = std::min(1.0, std::max(0.0, value));
    if (std::abs(clamped - value) > 1e-10)
        std::fprintf(stderr, "%s: clamped %.17g to [0,1]\n", who, value);
    return clamped;
}

// -psi'(0+) sum_{i>=1} e^{phi_i x}/psi'(phi_i): the profitable ruin
// probability with the constant 1 - psi'(0+)/psi'(0+) cancelled symbolically
Expansion ruin_tail(const ScaleForms& sf, double drift) {
    Expansion d;
    for (int i = 1; i < sf.n_all(); ++i) d.add_term(sf.root(i), -drift / sf.dpsi(i, 1));
    return d;
}

void validate_moment_args(const RiskModel& model, const Regime& regime, double x, int k) {
    if (k < 1 || k > 2)
        throw UnsupportedOrder("moments: k = " + std::to_string(k) + " not in {1, 2}");
    if (x < 0.0) throw NegativeArgument("moments: x must be nonnegative");
    if (!regime.unprofitable() && model.sigma2() > 0.0 && x == 0.0)
        throw InitialCapitalExcluded("moments: with sigma2 > 0 and x = 0 ruin is immediate; "
                                     "conditional moments at x = 0 are excluded");
}

} // namespace

double bell_partial(int l, int j, const std::vector<double>& args) {
    if (l < 1 || j < 1 || j > l)
        throw IndexOutOfRange("bell_partial: need 1 <= j <= l, got l = " + std::to_string(l) +
                              ", j = " + std::to_string(j));
    if (static_cast<int>(args.size()) < l - j + 1)
        throw IndexOutOfRange("bell_partial: need l-j+1 = " + std::to_string(l - j + 1) +
                              " arguments, got " + std::to_string(args.size()));
    std::vector<std::vector<double>> B(l + 1, std::vector<double>(j + 1, 0.0));
    B[0][0] = 1.0;
    for (int li = 1; li <= l; ++li)
        for (int jj = 1; jj <= std::min(li, j); ++jj) {
            double s = 0.0;
            for (int i = 1; i <= li - jj + 1 && i <= static_cast<int>(args.size()); ++i)
                s += binom(li - 1, i - 1) * args[i - 1] * B[li - i][jj - 1];
            B[li][jj] = s;
        }
    return B[l][j];
}

EtaDerivatives eta_derivs(const RiskModel& model, int k_max) {
    if (k_max < 0) throw IndexOutOfRange("eta_derivs: k_max must be nonnegative");
    const Regime regime = model.classify();
    EtaDerivatives out;
    out.values.assign(k_max + 1, 0.0);

    if (regime.unprofitable()) {
        out.values[0] = 0.0; // lim q/Phi(q) with Phi(0) > 0
        if (k_max == 0) return out;
        const double phi0 = phi_of_q(model, 0.0);
        const std::vector<double> ph = phi_q_derivs(model, phi0, std::max(1, k_max - 1));
        // eta^{(k)}(0+) = k g^{(k-1)}(0+) for g = 1/Phi, and
        // g^{(m)} = sum_j (-1)^j j! Phi(0)^{-(j+1)} B_{m,j}(phi', phi'', ...)
        std::vector<double> g(k_max, 0.0);
        g[0] = 1.0 / phi0;
        for (int m = 1; m < k_max; ++m) {
            double s = 0.0, jfact = 1.0;
            for (int j = 1; j <= m; ++j) {
                jfact *= j;
                const std::vector<double> args(ph.begin() + 1, ph.begin() + 1 + (m - j + 1));
                const double sign = (j % 2 == 0) ? 1.0 : -1.0;
                s += sign * jfact * bell_partial(m, j, args) / ipow(phi0, j + 1);
            }
            g[m] = s;
        }
        for (int kk = 1; kk <= k_max; ++kk) out.values[kk] = kk * g[kk - 1];
    } else {
        out.values[0] = regime.drift; // lim psi(Phi(q))/Phi(q) = psi'(0+)
        if (k_max == 0) return out;
        const std::vector<double> ph = phi_q_derivs(model, 0.0, k_max);
        for (int l = 1; l <= k_max; ++l) {
            double s = 0.0;
            for (int j = 1; j <= l; ++j) {
                const std::vector<double> args(ph.begin() + 1, ph.begin() + 1 + (l - j + 1));
                s += psi_deriv_n(model, 0.0, j + 1) / (j + 1.0) * bell_partial(l, j, args);
            }
            out.values[l] = s;
        }
    }
    return out;
}

double ruin_probability(const RiskModel& model, double x) {
    const Regime regime = model.classify();
    if (regime.unprofitable() || x < 0.0) return 1.0;
    const ScaleForms sf(model, 0.0);
    return clamp01("ruin_probability", ruin_tail(sf, regime.drift).eval(x));
}

MomentReport moments_general(const RiskModel& model, double x, int k) {
    const Regime regime = model.classify();
    validate_moment_args(model, regime, x, k);

    const ScaleForms sf(model, 0.0);
    const EtaDerivatives eta = eta_derivs(model, 2);
    const Expansion w = sf.w();
    const Expansion w_int = w.antiderivative();
    const Expansion w_dq = sf.w_dq(1);

    MomentReport rep;
    rep.x = x;
    rep.regime = regime;
    rep.method = Method::General;
    rep.second = rep.variance = std::numeric_limits<double>::quiet_NaN();

    if (regime.unprofitable()) {
        rep.ruin_prob = 1.0;
        const complexd phi0(sf.system().phi, 0.0);

        Expansion m1; // eta' W0(x) - int_0^x W0
        m1.add(w, eta.values[1]);
        m1.add(w_int, -1.0);
        cancel_root_checked(m1, phi0, std::abs(eta.values[1]) * coeff_max(w.coeffs_at(phi0)) +
                                          coeff_max(w_int.coeffs_at(phi0)));
        rep.mean = m1.eval(x);

        if (k == 2) {
            Expansion m2; // 2 int dW/dq - 2 eta' dW/dq(x) - eta'' W0(x)
            m2.add(w_dq.antiderivative(), 2.0);
            m2.add(w_dq, -2.0 * eta.values[1]);
            m2.add(w, -eta.values[2]);
            cancel_root_checked(m2, phi0,
                                2.0 * coeff_max(w_dq.antiderivative().coeffs_at(phi0)) +
                                    2.0 * std::abs(eta.values[1]) *
                                        coeff_max(w_dq.coeffs_at(phi0)) +
                                    std::abs(eta.values[2]) * coeff_max(w.coeffs_at(phi0)));
            rep.second = m2.eval(x);
            rep.variance = rep.second - rep.mean * rep.mean;
        }
    } else {
        const Expansion den = ruin_tail(sf, regime.drift);
        const double shift = den.max_root_real();
        const double den_damped = den.eval_damped(x, shift);
        rep.ruin_prob = clamp01("moments_general", den.eval(x));

        Expansion num1; // psi'(0+) dW/dq(x) + eta' W0(x) - int_0^x W0
        num1.add(w_dq, eta.values[0]);
        num1.add(w, eta.values[1]);
        num1.add(w_int, -1.0);
        clear_poly_checked(num1, std::abs(eta.values[0]) * w_dq.poly_max() +
                                     std::abs(eta.values[1]) * w.poly_max() + w_int.poly_max());
        rep.mean = num1.eval_damped(x, shift) / den_damped;

        if (k == 2) {
            const Expansion w_dq2 = sf.w_dq(2);
            Expansion num2; // 2 int dW/dq - psi'(0+) d2W/dq2 - 2 eta' dW/dq - eta'' W0
            num2.add(w_dq.antiderivative(), 2.0);
            num2.add(w_dq2, -eta.values[0]);
            num2.add(w_dq, -2.0 * eta.values[1]);
            num2.add(w, -eta.values[2]);
            clear_poly_checked(num2, 2.0 * w_dq.antiderivative().poly_max() +
                                         std::abs(eta.values[0]) * w_dq2.poly_max() +
                                         2.0 * std::abs(eta.values[1]) * w_dq.poly_max() +
                                         std::abs(eta.values[2]) * w.poly_max());
            rep.second = num2.eval_damped(x, shift) / den_damped;
            rep.variance = rep.second - rep.mean * rep.mean;
        }
    }
    return rep;
}

MomentReport moments_phase_type(const RiskModel& model, double x, int k) {
    const Regime regime = model.classify();
    validate_moment_args(model, regime, x, k);

    const ScaleForms sf(model, 0.0);
    const double dp1 = regime.drift;               // psi'(0+)
    const double dp2 = model.psi_deriv(0.0, 2);    // psi''(0+)
    const double dp3 = model.psi_deriv(0.0, 3);    // psi'''(0+)

    MomentReport rep;
    rep.x = x;
    rep.regime = regime;
    rep.method = Method::PhaseTypeClosed;
    rep.second = rep.variance = std::numeric_limits<double>::quiet_NaN();

    if (regime.unprofitable()) {
        rep.ruin_prob = 1.0;
        const double phi0 = sf.system().phi;
        const double dphi1 = sf.dpsi(0, 1).real(); // psi'(Phi(0))

        Expansion m1; // -x/psi'(0+) + C1 + eps1(x)
        m1.add_poly(1, -1.0 / dp1);
        m1.add_poly(0, 1.0 / (phi0 * dp1) + dp2 / (2.0 * dp1 * dp1));
        for (int i = 1; i < sf.n_all(); ++i) {
            const complexd ph = sf.root(i);
            if (std::abs(ph) < 1e-14) continue; // the zero root stays out of the remainder
            m1.add_term(ph, (1.0 / phi0 - 1.0 / ph) / sf.dpsi(i, 1));
        }
        rep.mean = m1.eval(x);

        if (k == 2) {
            Expansion m2; // x^2/psi'^2 - (2/psi'^2)(psi''/psi' + 1/Phi0) x + C2 + eps2(x)
            m2.add_poly(2, 1.0 / (dp1 * dp1));
            m2.add_poly(1, -(2.0 / (dp1 * dp1)) * (dp2 / dp1 + 1.0 / phi0));
            m2.add_poly(0, 2.0 * dp2 / (phi0 * ipow(dp1, 3)) +
                               2.0 / (phi0 * phi0 * dphi1 * dp1) +
                               3.0 * dp2 * dp2 / (2.0 * ipow(dp1, 4)) -
                               2.0 * dp3 / (3.0 * ipow(dp1, 3)));
            for (int i = 1; i < sf.n_all(); ++i) {
                const complexd ph = sf.root(i);
                if (std::abs(ph) < 1e-14) continue;
                const complexd d1 = sf.dpsi(i, 1), d2 = sf.dpsi(i, 2);
                const complexd c1 = 2.0 * (1.0 / ph - 1.0 / phi0) / (d1 * d1);
                const complexd c0 =
                    2.0 * (d2 / (d1 * d1 * d1) * (1.0 / phi0 - 1.0 / ph) +
                           1.0 / (phi0 * phi0 * dphi1 * d1) - 1.0 / (d1 * d1 * ph * ph));
                m2.add_term(ph, c0, c1);
            }
            rep.second = m2.eval(x);
            rep.variance = rep.second - rep.mean * rep.mean;
        }
    } else {
        Expansion den;  // D(x) = sum_i e^{phi_i x}/psi'(phi_i)
        Expansion num1; // sum_i e^{phi_i x} (x/psi'(phi_i)^2 - [...])
        Expansion num2; // sum_i e^{phi_i x} (x^2/psi'(phi_i)^3 + B_i x + C_i)
        for (int i = 1; i < sf.n_all(); ++i) {
            const complexd ph = sf.root(i);
            const complexd d1 = sf.dpsi(i, 1), d2 = sf.dpsi(i, 2), d3 = sf.dpsi(i, 3);
            den.add_term(ph, 1.0 / d1);
            num1.add_term(ph,
                          -(d2 / (d1 * d1 * d1) - dp2 / (2.0 * dp1 * dp1 * d1) +
                            1.0 / (dp1 * d1 * ph)),
                          1.0 / (d1 * d1));
            if (k == 2) {
                const complexd B = dp2 / (dp1 * dp1 * d1 * d1) - 2.0 / (d1 * d1 * ph * dp1) -
                                   3.0 * d2 / std::pow(d1, 4);
                const complexd C = 2.0 / (d1 * d1 * ph * ph * dp1) - d3 / std::pow(d1, 4) +
                                   dp3 / (3.0 * d1 * ipow(dp1, 3)) -
                                   dp2 * dp2 / (2.0 * d1 * ipow(dp1, 4)) - (d2 / d1) * B;
                num2.add_term(ph, C, B, 1.0 / (d1 * d1 * d1));
            }
        }
        const double shift = den.max_root_real();
        const double den_damped = den.eval_damped(x, shift);
        rep.ruin_prob = clamp01("moments_phase_type", -dp1 * den.eval(x));
        rep.mean = -num1.eval_damped(x, shift) / den_damped;
        if (k == 2) {
            rep.second = num2.eval_damped(x, shift) / den_damped;
            rep.variance = rep.second - rep.mean * rep.mean;
        }
    }
    return rep;
}

MomentReport moments_exponential(const RiskModel& model, double x, int k) {
    const double gamma = model.claims().rate(); // throws unless d = 1
    const Regime regime = model.classify();
    validate_moment_args(model, regime, x, k);

    const double p = model.premium(), s2 = model.sigma2(), lam = model.lambda();
    const bool down = regime.unprofitable();

    MomentReport rep;
    rep.x = x;
    rep.regime = regime;
    rep.method = Method::ExponentialClosed;
    rep.second = rep.variance = std::numeric_limits<double>::quiet_NaN();

    if (s2 == 0.0) {
        rep.ruin_prob =
            down ? 1.0 : clamp01("moments_exponential", lam / (p * gamma) *
                                                            std::exp(-(gamma - lam / p) * x));
        rep.mean = down ? (gamma * x + 1.0) / (lam - p * gamma)
                        : ((lam / p) * x + 1.0) / (p * gamma - lam);
        if (k == 2) {
            rep.variance =
                (2.0 * lam * gamma * x + p * gamma + lam) / ipow(std::abs(p * gamma - lam), 3);
            rep.second = rep.variance + rep.mean * rep.mean;
        }
        return rep;
    }

    const double r = std::sqrt(ipow(gamma * s2 - 2.0 * p, 2) + 8.0 * lam * s2);
    if (down) {
        rep.ruin_prob = 1.0;
        const double dn = lam - p * gamma; // > 0 here
        const double vminus = gamma * s2 + 2.0 * p - r;
        const double decay = (gamma * s2 + 2.0 * p + r) / (2.0 * s2);
        const double e = std::exp(-decay * x);
        const double C1 = lam / (dn * dn) + gamma * gamma * s2 / (2.0 * dn * dn) +
                          2.0 * gamma * s2 / (dn * vminus);
        rep.mean = gamma * x / dn + C1 * (1.0 - e);
        if (k == 2) {
            const double B = (2.0 * gamma * gamma / (dn * dn)) *
                             (2.0 * lam / (gamma * dn) + gamma * s2 / dn + 2.0 * s2 / vminus);
            const double C2 = -4.0 * lam / ipow(dn, 3) +
                              3.0 * ipow(s2 * gamma * gamma + 2.0 * lam, 2) / (2.0 * ipow(dn, 4)) +
                              (4.0 * ipow(gamma, 3) * s2 * s2 + 8.0 * lam * gamma * s2) /
                                  (ipow(dn, 3) * vminus) +
                              (16.0 * gamma * s2 * s2 / (r * dn)) *
                                  ((gamma * s2 - 2.0 * p + r) / ipow(vminus, 3));
            const double slope =
                B - ipow((gamma * s2 - 2.0 * p - r) / (gamma * s2 + 2.0 * p + r), 2) *
                        (4.0 / (r * dn)) * e;
            rep.second = gamma * gamma * x * x / (dn * dn) + slope * x + C2 * (1.0 - e);
            rep.variance = rep.second - rep.mean * rep.mean;
        }
        return rep;
    }

    // profitable, s2 > 0: two-branch closed form indexed by sign = +-1
    const double dn = p * gamma - lam; // > 0 here
    const double eps = -((gamma * s2 - 2.0 * p - r) / (gamma * s2 - 2.0 * p + r)) *
                       ((gamma * s2 + 2.0 * p - r) / (gamma * s2 + 2.0 * p + r)) *
                       std::exp(-r * x / s2);
    double mean = 0.0, second = 0.0;
    for (const double sign : {1.0, -1.0}) {
        const double u = gamma * s2 - 2.0 * p + sign * r;
        const double v = gamma * s2 + 2.0 * p - sign * r;
        const double wq = gamma * s2 - 2.0 * p - sign * r;
        const double box = 1.0 + 16.0 * lam * gamma * s2 * s2 / ipow(u, 3);
        const double A = -lam / (dn * dn) - gamma * gamma * s2 / (2.0 * dn * dn) -
                         2.0 * gamma * s2 / (dn * v) + (4.0 * s2 / (r * r)) * ipow(u / v, 2) * box;
        const double denom = (sign > 0.0) ? 1.0 + eps : 1.0 + 1.0 / eps;
        mean += (sign * (2.0 / r) * (u / v) * x + A) / denom;
        if (k == 2) {
            const double B = -sign * (2.0 / r) * (u / v) *
                                 ((2.0 * lam + gamma * gamma * s2) / (dn * dn) +
                                  4.0 * gamma * s2 / (dn * v)) +
                             sign * (24.0 * s2 / ipow(r, 3)) * ipow(u / v, 3) * box;
            const double C = -2.0 * lam / ipow(dn, 3) -
                             ipow(2.0 * lam + gamma * gamma * s2, 2) / (2.0 * ipow(dn, 4)) +
                             sign * (96.0 * gamma * ipow(s2, 3) / ipow(r, 3)) * (wq / ipow(v, 3)) -
                             sign * (16.0 * gamma * s2 * s2 / (r * dn)) * (u / ipow(v, 3)) +
                             sign * (2.0 * s2 / r) * (u / v) * box * B;
            second += ((4.0 / (r * r)) * ipow(u / v, 2) * x * x + B * x + C) / denom;
        }
    }
    rep.mean = mean;
    if (k == 2) {
        rep.second = second;
        rep.variance = second - mean * mean;
    }

    // ruin probability from the two explicit negative roots of psi(z) = 0
    const double z2 = (-gamma * s2 - 2.0 * p + r) / (2.0 * s2);
    const double z3 = (-gamma * s2 - 2.0 * p - r) / (2.0 * s2);
    const auto dpsi = [&](double z) { return p + s2 * z - lam * gamma / ipow(z + gamma, 2); };
    rep.ruin_prob = clamp01("moments_exponential",
                            -dn / gamma *
                                (std::exp(z2 * x) / dpsi(z2) + std::exp(z3 * x) / dpsi(z3)));
    return rep;
}

double moments_convolution(const RiskModel& model, double x, int k, double h) {
    if (k < 1) throw UnsupportedOrder("moments_convolution: k must be positive");
    if (k > 6)
        throw UnsupportedOrder("moments_convolution: k capped at 6 (Bell argument depth)");
    if (!(x > 0.0)) throw DomainError("moments_convolution: x must be positive");
    if (!(h > 0.0)) throw DomainError("moments_convolution: h must be positive");

    const int m = std::max(1, static_cast<int>(std::lround(std::ceil(x / h))));
    const double h_eff = x / m; // land on x exactly
    const std::vector<GridFunction> grids = conv_powers(model, x, h_eff, k + 1);

    const std::vector<double>& gk = grids[k - 1].values;
    double integral = 0.5 * (gk[0] + gk[m]);
    for (int j = 1; j < m; ++j) integral += gk[j];
    integral *= h_eff;

    const EtaDerivatives eta = eta_derivs(model, k);
    double correction = 0.0;
    for (int l = 0; l <= k; ++l)
        correction += eta.values[l] / factorial(l) * grids[k - l].values[m];

    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial(k) * (integral - correction) / ruin_probability(model, x);
}

double laplace_uk(const RiskModel& model, int k, double beta) {
    if (beta <= 0.0) throw BetaNonpositive("laplace_uk: beta must be positive");
    if (k < 1 || k > 20) throw UnsupportedOrder("laplace_uk: k must be in 1..20");
    const Regime regime = model.classify();
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;

    if (regime.unprofitable() && std::abs(beta - phi_of_q(model, 0.0)) < 1e-8) {
        // removable singularity at beta = Phi(0): limiting value
        // (-1)^k d^k/dq^k (1/Phi)(0+) = (-1)^k eta^{(k+1)}(0+)/(k+1)
        const EtaDerivatives eta = eta_derivs(model, k + 1);
        return sign * eta.values[k + 1] / (k + 1.0);
    }

    const EtaDerivatives eta = eta_derivs(model, k);
    const double psib = model.psi(beta);
    double s = 1.0 / (beta * ipow(psib, k));
    if (!regime.unprofitable()) s -= regime.drift / ipow(psib, k + 1);
    for (int l = 1; l <= k; ++l) s -= eta.values[l] / (factorial(l) * ipow(psib, k - l + 1));
    return sign * factorial(k) * s;
}

double asymptotic_slope(const RiskModel& model, int k) {
    if (k < 1) throw UnsupportedOrder("asymptotic_slope: k must be positive");
    const Regime regime = model.classify();
    if (!regime.unprofitable()) return 0.0; // u_k(x) P_x(ruin) -> 0
    return 1.0 / ipow(std::abs(regime.drift), k);
}

} // namespace ruin
