#include "ruin/scale.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "ruin/errors.hpp"

namespace ruin {

using complexd = std::complex<double>;

namespace {
constexpr double kRootMatchTol = 1e-9;
} // namespace

void Expansion::add_term(complexd root, complexd c0, complexd c1, complexd c2) {
    if (std::abs(root) < 1e-14) { // a zero root is just a polynomial
        add_poly(0, c0);
        add_poly(1, c1);
        add_poly(2, c2);
        return;
    }
    for (ExpTerm& t : terms_) {
        if (std::abs(t.root - root) < 1e-12 * (1.0 + std::abs(root))) {
            t.c0 += c0;
            t.c1 += c1;
            t.c2 += c2;
            return;
        }
    }
    terms_.push_back({root, c0, c1, c2});
}

void Expansion::add_poly(int power, complexd coeff) {
    if (coeff == 0.0) return;
    if (static_cast<int>(poly_.size()) <= power) poly_.resize(power + 1, 0.0);
    poly_[power] += coeff;
}

void Expansion::add(const Expansion& other, complexd weight) {
    for (const ExpTerm& t : other.terms_)
        add_term(t.root, weight * t.c0, weight * t.c1, weight * t.c2);
    for (std::size_t k = 0; k < other.poly_.size(); ++k)
        add_poly(static_cast<int>(k), weight * other.poly_[k]);
}

Expansion Expansion::antiderivative() const {
    Expansion out;
    for (const ExpTerm& t : terms_) {
        const complexd a2 = t.c2 / t.root;
        const complexd a1 = (t.c1 - 2.0 * a2) / t.root;
        const complexd a0 = (t.c0 - a1) / t.root;
        out.add_term(t.root, a0, a1, a2);
        out.add_poly(0, -a0);
    }
    for (std::size_t k = 0; k < poly_.size(); ++k)
        out.add_poly(static_cast<int>(k) + 1, poly_[k] / (static_cast<double>(k) + 1.0));
    return out;
}

double Expansion::remove_root(complexd root) {
    double removed = 0.0;
    for (std::size_t i = 0; i < terms_.size();) {
        if (std::abs(terms_[i].root - root) < kRootMatchTol * (1.0 + std::abs(root))) {
            removed = std::max({removed, std::abs(terms_[i].c0), std::abs(terms_[i].c1),
                                std::abs(terms_[i].c2)});
            terms_.erase(terms_.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return removed;
}

void Expansion::clear_poly() { poly_.clear(); }

std::array<complexd, 3> Expansion::coeffs_at(complexd root) const {
    std::array<complexd, 3> out{0.0, 0.0, 0.0};
    for (const ExpTerm& t : terms_) {
        if (std::abs(t.root - root) < kRootMatchTol * (1.0 + std::abs(root))) {
            out[0] += t.c0;
            out[1] += t.c1;
            out[2] += t.c2;
        }
    }
    return out;
}

double Expansion::poly_max() const {
    double m = 0.0;
    for (const complexd& c : poly_) m = std::max(m, std::abs(c));
    return m;
}

double Expansion::eval(double x) const { return eval_damped(x, 0.0); }

double Expansion::eval_damped(double x, double shift) const {
    complexd acc(0.0, 0.0);
    for (const ExpTerm& t : terms_)
        acc += std::exp((t.root - shift) * x) * (t.c0 + x * (t.c1 + x * t.c2));
    if (!poly_.empty()) {
        complexd pv(0.0, 0.0);
        for (std::size_t k = poly_.size(); k-- > 0;) pv = pv * x + poly_[k];
        acc += pv * std::exp(-shift * x);
    }
    if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real())))
        throw DomainError("expansion eval: imaginary residue " + std::to_string(acc.imag()) +
                          " at x = " + std::to_string(x));
    return acc.real();
}

double Expansion::max_root_real() const {
    double m = 0.0;
    bool first = true;
    for (const ExpTerm& t : terms_) {
        if (first || t.root.real() > m) m = t.root.real();
        first = false;
    }
    return first ? 0.0 : m;
}

ScaleForms::ScaleForms(const RiskModel& model, double q) : sys_(solve_roots(model, q)) {
    all_.reserve(sys_.roots.size() + 1);
    all_.emplace_back(sys_.phi, 0.0);
    all_.insert(all_.end(), sys_.roots.begin(), sys_.roots.end());
    derivs_.reserve(all_.size());
    for (const complexd& z : all_)
        derivs_.push_back({model.psi_deriv(z, 1), model.psi_deriv(z, 2), model.psi_deriv(z, 3)});
}

Expansion ScaleForms::w() const {
    Expansion out;
    for (int i = 0; i < n_all(); ++i) out.add_term(all_[i], 1.0 / derivs_[i][0]);
    return out;
}

Expansion ScaleForms::w_int() const { return w().antiderivative(); }

Expansion ScaleForms::w_dq(int order) const {
    if (order < 1 || order > 2)
        throw UnsupportedOrder("w_dq: order " + std::to_string(order) + " not in 1..2");
    Expansion out;
    for (int i = 0; i < n_all(); ++i) {
        const complexd d1 = derivs_[i][0], d2 = derivs_[i][1], d3 = derivs_[i][2];
        if (order == 1) {
            out.add_term(all_[i], -d2 / std::pow(d1, 3), 1.0 / (d1 * d1));
        } else {
            out.add_term(all_[i], 3.0 * d2 * d2 / std::pow(d1, 5) - d3 / std::pow(d1, 4),
                         -3.0 * d2 / std::pow(d1, 4), 1.0 / std::pow(d1, 3));
        }
    }
    return out;
}

double scale_w(const RiskModel& model, double q, double x) {
    if (x < 0.0) return 0.0;
    return ScaleForms(model, q).w().eval(x);
}

double scale_w_int(const RiskModel& model, double q, double x) {
    if (x <= 0.0) return 0.0;
    return ScaleForms(model, q).w_int().eval(x);
}

double scale_w_dq(const RiskModel& model, double q, double x, int order) {
    if (x < 0.0) return 0.0;
    return ScaleForms(model, q).w_dq(order).eval(x);
}

std::vector<GridFunction> conv_powers(const RiskModel& model, double x_max, double h, int k_max) {
    if (!(h > 0.0) || x_max < 0.0) throw DomainError("conv_powers: need h > 0 and x_max >= 0");
    if (k_max < 1) throw DomainError("conv_powers: k_max must be >= 1");
    const int n = static_cast<int>(std::ceil(x_max / h)) + 1;

    const Expansion w = ScaleForms(model, 0.0).w();
    std::vector<GridFunction> out;
    out.reserve(k_max);
    out.push_back({h, {}});
    out[0].values.resize(n);
    for (int j = 0; j < n; ++j) out[0].values[j] = w.eval(h * j);

    for (int k = 1; k < k_max; ++k) {
        const std::vector<double>& prev = out[k - 1].values;
        const std::vector<double>& base = out[0].values;
        GridFunction g{h, std::vector<double>(n, 0.0)};
        for (int m = 1; m < n; ++m) {
            double s = 0.5 * (prev[0] * base[m] + prev[m] * base[0]);
            for (int j = 1; j < m; ++j) s += prev[j] * base[m - j];
            g.values[m] = h * s;
        }
        out.push_back(std::move(g));
    }
    return out;
}

double default_grid_step(const RiskModel& model) {
    const RootSystem sys = solve_roots(model, 0.0);
    const double rate = model.classify().unprofitable() ? sys.phi : std::abs(sys.roots.front());
    return 1.0 / (200.0 * rate);
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, eps, 30);
}

} // namespace

std::pair<double, double> laplace_check(const RiskModel& model, double q, double beta) {
    const double phi = phi_of_q(model, q);
    if (beta <= phi)
        throw BetaTooSmall("laplace_check: beta = " + std::to_string(beta) +
                           " must exceed Phi(q) = " + std::to_string(phi));
    const Expansion w = ScaleForms(model, q).w();
    const double x_cut = 40.0 / (beta - phi);
    const double analytic = 1.0 / (model.psi(beta) - q);

    const auto integrand = [&](double x) { return std::exp(-beta * x) * w.eval(x); };
    double numeric =
        adaptive_simpson(integrand, 0.0, x_cut, 1e-10 * std::max(1.0, std::abs(analytic)));

    // exact tail over [x_cut, inf): per-root geometric pieces plus the
    // constant part (W has no higher polynomial content)
    for (const ExpTerm& t : w.terms())
        numeric += (std::exp((t.root - beta) * x_cut) * t.c0 / (beta - t.root)).real();
    if (!w.poly().empty())
        numeric += (w.poly()[0] * std::exp(-beta * x_cut) / beta).real();
    return {numeric, analytic};
}

} // namespace ruin
