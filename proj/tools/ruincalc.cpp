#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ruin/errors.hpp"
#include "ruin/model_config.hpp"
#include "ruin/moments.hpp"
#include "ruin/monte_carlo.hpp"
#include "ruin/scale.hpp"

using namespace ruin;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* regime_name(const Regime& r) { return r.unprofitable() ? "unprofitable" : "profitable"; }

const char* domain_error_name(const DomainError& e) {
    if (dynamic_cast<const CriticalDrift*>(&e)) return "CriticalDrift";
    if (dynamic_cast<const SingularResolvent*>(&e)) return "SingularResolvent";
    if (dynamic_cast<const UnsupportedOrder*>(&e)) return "UnsupportedOrder";
    if (dynamic_cast<const NegativeArgument*>(&e)) return "NegativeArgument";
    if (dynamic_cast<const MultipleRootDetected*>(&e)) return "MultipleRootDetected";
    if (dynamic_cast<const ResidualTooLarge*>(&e)) return "ResidualTooLarge";
    if (dynamic_cast<const NearCriticalRoot*>(&e)) return "NearCriticalRoot";
    if (dynamic_cast<const BetaTooSmall*>(&e)) return "BetaTooSmall";
    if (dynamic_cast<const BetaNonpositive*>(&e)) return "BetaNonpositive";
    if (dynamic_cast<const NotExponentialClaims*>(&e)) return "NotExponentialClaims";
    if (dynamic_cast<const InitialCapitalExcluded*>(&e)) return "InitialCapitalExcluded";
    if (dynamic_cast<const InvalidStart*>(&e)) return "InvalidStart";
    if (dynamic_cast<const NoRuinObserved*>(&e)) return "NoRuinObserved";
    if (dynamic_cast<const IndexOutOfRange*>(&e)) return "IndexOutOfRange";
    return "DomainError";
}

MomentReport compute_report(const RiskModel& model, double x, int k, const std::string& method) {
    if (method == "general") return moments_general(model, x, k);
    if (method == "conv") {
        MomentReport r;
        r.x = x;
        r.regime = model.classify();
        r.method = Method::Convolution;
        r.ruin_prob = ruin_probability(model, x);
        const double h = default_grid_step(model);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.mean = moments_convolution(model, x, 1, h);
        r.second = k >= 2 ? moments_convolution(model, x, 2, h) : nan;
        r.variance = k >= 2 ? r.second - r.mean * r.mean : nan;
        return r;
    }
    // auto/closed prefer the closed forms
    if (model.claims().is_exponential()) return moments_exponential(model, x, k);
    return moments_phase_type(model, x, k);
}

int cmd_moments(const std::string& config, double x, int k, const std::string& method) {
    RiskModel model = load_model_config(config);
    MomentReport r = compute_report(model, x, k, method);
    std::printf("model:     %s\n", config.c_str());
    std::printf("regime:    %s (drift %s)\n", regime_name(r.regime), fmt(r.regime.drift).c_str());
    std::printf("method:    %s\n", method_name(r.method));
    std::printf("x:         %s\n", fmt(r.x).c_str());
    std::printf("ruin_prob: %s\n", fmt(r.ruin_prob).c_str());
    std::printf("mean:      %s\n", fmt(r.mean).c_str());
    if (k >= 2) {
        std::printf("second:    %s\n", fmt(r.second).c_str());
        std::printf("variance:  %s\n", fmt(r.variance).c_str());
    }
    return 0;
}

int cmd_curve(const std::string& config, double x_min, double x_max, long steps, int k,
              const std::string& method, const std::string& out) {
    if (steps > 1 && x_max < x_min) throw ConfigError("x-max must be >= x-min");
    RiskModel model = load_model_config(config);
    std::ofstream os(out, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file " + out);
    os << "x,ruin_prob,mean,second,variance\n";
    for (long i = 0; i < steps; ++i) {
        const double x =
            steps == 1 ? x_min : x_min + (x_max - x_min) * double(i) / double(steps - 1);
        MomentReport r = compute_report(model, x, k, method);
        os << fmt(x) << ',' << fmt(r.ruin_prob) << ',' << fmt(r.mean) << ',' << fmt(r.second)
           << ',' << fmt(r.variance) << '\n';
    }
    os.flush();
    if (!os) throw ConfigError("failed writing " + out);
    return 0;
}

int cmd_mc(const std::string& config, double x, std::int64_t paths, std::uint64_t seed,
           double barrier, double bridge_tol, const std::string& out) {
    RiskModel model = load_model_config(config);
    MomentReport r = compute_report(model, x, 2, "auto");
    McConfig mc;
    mc.n_paths = paths;
    mc.seed = seed;
    mc.barrier = barrier;
    mc.bridge_tol = bridge_tol;
    McEstimate est = estimate(model, x, mc);

    auto zscore = [](double analytic, double hat, double se) {
        const double diff = hat - analytic;
        if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return diff / se;
    };
    const double z_prob = zscore(r.ruin_prob, est.ruin_prob_hat, est.ruin_prob_se);
    const double z_mean = zscore(r.mean, est.mean_hat, est.mean_se);
    const double z_second = zscore(r.second, est.second_hat, est.second_se);

    std::string table;
    char line[200];
    auto emit = [&](const char* s) { table += s; };
    std::snprintf(line, sizeof(line), "model:   %s\n", config.c_str());
    emit(line);
    std::snprintf(line, sizeof(line), "regime:  %s (drift %s)\n", regime_name(r.regime),
                  fmt(r.regime.drift).c_str());
    emit(line);
    std::snprintf(line, sizeof(line), "x: %s  paths: %lld  seed: %llu\n", fmt(x).c_str(),
                  static_cast<long long>(paths), static_cast<unsigned long long>(seed));
    emit(line);
    std::snprintf(line, sizeof(line), "%-10s %25s %25s %25s %25s\n", "quantity", "analytic",
                  "estimate", "se", "z");
    emit(line);
    auto row = [&](const char* name, double analytic, double hat, double se, double zv) {
        std::snprintf(line, sizeof(line), "%-10s %25s %25s %25s %25s\n", name,
                      fmt(analytic).c_str(), fmt(hat).c_str(), fmt(se).c_str(), fmt(zv).c_str());
        emit(line);
    };
    row("ruin_prob", r.ruin_prob, est.ruin_prob_hat, est.ruin_prob_se, z_prob);
    row("mean", r.mean, est.mean_hat, est.mean_se, z_mean);
    row("second", r.second, est.second_hat, est.second_se, z_second);
    std::snprintf(line, sizeof(line), "ruined: %lld  escaped: %lld  censored: %lld\n",
                  static_cast<long long>(est.n_ruined), static_cast<long long>(est.n_escaped),
                  static_cast<long long>(est.n_censored));
    emit(line);
    std::snprintf(line, sizeof(line), "barrier: %s  bias_bound: %s\n",
                  fmt(est.barrier_used).c_str(), fmt(est.bias_bound).c_str());
    emit(line);

    std::fputs(table.c_str(), stdout);
    if (!out.empty()) {
        std::ofstream os(out, std::ios::binary);
        if (!os) throw ConfigError("cannot open output file " + out);
        os << table;
        if (!os.flush()) throw ConfigError("failed writing " + out);
    }
    const bool tripped =
        std::abs(z_prob) > 4.0 || std::abs(z_mean) > 4.0 || std::abs(z_second) > 4.0;
    return tripped ? 1 : 0;
}

struct CheckState {
    bool ok = true;
    void report(const char* name, double residual, double tol) {
        const bool pass = residual <= tol; // NaN fails
        ok = ok && pass;
        std::printf("%-36s %12.3e  (tol %.0e)  %s\n", name, residual, tol, pass ? "PASS" : "FAIL");
    }
};

int cmd_check(const std::string& config) {
    RiskModel model = load_model_config(config);
    const Regime regime = model.classify();
    std::printf("model:  %s\nregime: %s (drift %s)\n", config.c_str(), regime_name(regime),
                fmt(regime.drift).c_str());
    CheckState st;

    double root_res = 0.0, pf_err = 0.0, lap_err = 0.0;
    for (double q : {0.0, 0.3, 1.0}) {
        ScaleForms sf(model, q);
        const RootSystem& sys = sf.system();
        for (int i = 0; i < sf.n_all(); ++i) {
            const std::complex<double> z = sf.root(i);
            const double scale = std::max({1.0, q, std::abs(sf.dpsi(i, 1))});
            root_res = std::max(root_res, std::abs(model.psi(z) - q) / scale);
        }
        for (double off : {0.7, 1.3, 2.9}) {
            const std::complex<double> theta(sys.phi + off, 0.0);
            const std::complex<double> lhs = 1.0 / (model.psi(theta) - q);
            std::complex<double> rhs = 0.0;
            for (int i = 0; i < sf.n_all(); ++i) rhs += 1.0 / (sf.dpsi(i, 1) * (theta - sf.root(i)));
            pf_err = std::max(pf_err, std::abs(lhs - rhs) / std::abs(lhs));
        }
        for (double off : {0.5, 1.0, 2.0}) {
            auto [numeric, analytic] = laplace_check(model, q, sys.phi + off);
            lap_err = std::max(lap_err,
                               std::abs(numeric - analytic) / std::max(std::abs(analytic), 1e-300));
        }
    }
    st.report("root residuals (q in {0,0.3,1})", root_res, 1e-8);
    st.report("partial-fraction identity", pf_err, 1e-8);
    st.report("Laplace transform of W", lap_err, 1e-6);

    {
        ScaleForms sf(model, 0.0);
        EtaDerivatives eta = eta_derivs(model, 2);
        Expansion num1;
        num1.add(sf.w_dq(1), eta.values[0]);
        num1.add(sf.w(), eta.values[1]);
        num1.add(sf.w_int(), -1.0);
        Expansion num2;
        num2.add(sf.w_dq(1).antiderivative(), 2.0);
        num2.add(sf.w_dq(2), -eta.values[0]);
        num2.add(sf.w_dq(1), -2.0 * eta.values[1]);
        num2.add(sf.w(), -eta.values[2]);
        auto coeff_scale = [](const Expansion& e) {
            double m = 1e-300;
            for (const ExpTerm& t : e.terms())
                m = std::max({m, std::abs(t.c0), std::abs(t.c1), std::abs(t.c2)});
            for (const std::complex<double>& c : e.poly()) m = std::max(m, std::abs(c));
            return m;
        };
        // the coefficient group that the moment identities say must vanish:
        // the Phi(0)-root terms when ruin is certain, the free polynomial otherwise
        auto residual = [&](const Expansion& e) {
            if (regime.unprofitable()) {
                auto c = e.coeffs_at(sf.root(0));
                return std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])}) / coeff_scale(e);
            }
            return e.poly_max() / coeff_scale(e);
        };
        st.report("first root-sum identity", residual(num1), 1e-8);
        st.report("second root-sum identity", residual(num2), 1e-8);
    }

    double cross_err = 0.0;
    for (double x : {0.5, 2.0, 10.0}) {
        std::vector<MomentReport> reports;
        reports.push_back(moments_general(model, x, 2));
        reports.push_back(moments_phase_type(model, x, 2));
        if (model.claims().is_exponential()) reports.push_back(moments_exponential(model, x, 2));
        auto rel = [](double u, double v) {
            const double m = std::max(std::abs(u), std::abs(v));
            return m == 0.0 ? 0.0 : std::abs(u - v) / m;
        };
        for (size_t i = 1; i < reports.size(); ++i) {
            cross_err = std::max({cross_err, rel(reports[0].ruin_prob, reports[i].ruin_prob),
                                  rel(reports[0].mean, reports[i].mean),
                                  rel(reports[0].second, reports[i].second)});
        }
    }
    st.report("cross-method moments", cross_err, 1e-8);

    std::printf("%s\n", st.ok ? "all checks passed" : "check failures");
    return st.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ruin probabilities and ruin-time moments for Brownian-perturbed risk processes "
                 "with phase-type claims"};
    app.require_subcommand(1);

    std::string config, method = "auto", out;
    double x = 0.0, x_min = 0.0, x_max = 0.0, barrier = 0.0, bridge_tol = 1e-6;
    int k = 2;
    long steps = 1;
    std::int64_t paths = 0;
    std::uint64_t seed = 0;

    const std::vector<std::string> methods = {"auto", "general", "closed", "conv"};

    CLI::App* mom = app.add_subcommand("moments", "conditional ruin-time moments at one x");
    mom->add_option("--config", config, "model config (JSON)")->required();
    mom->add_option("--x", x, "initial capital")->required();
    mom->add_option("--k", k, "highest moment, 1 or 2")->check(CLI::Range(1, 2));
    mom->add_option("--method", method, "auto|general|closed|conv")->check(CLI::IsMember(methods));

    CLI::App* curve = app.add_subcommand("curve", "CSV of ruin probability and moments on a grid");
    curve->add_option("--config", config, "model config (JSON)")->required();
    curve->add_option("--x-min", x_min, "first grid point")->required();
    curve->add_option("--x-max", x_max, "last grid point")->required();
    curve->add_option("--steps", steps, "number of grid points")
        ->required()
        ->check(CLI::PositiveNumber);
    curve->add_option("--k", k, "highest moment, 1 or 2")->check(CLI::Range(1, 2));
    curve->add_option("--method", method, "auto|general|closed|conv")->check(CLI::IsMember(methods));
    curve->add_option("--out", out, "output CSV path")->required();

    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo cross-check against analytic values");
    mc->add_option("--config", config, "model config (JSON)")->required();
    mc->add_option("--x", x, "initial capital")->required();
    mc->add_option("--paths", paths, "number of simulated paths")
        ->required()
        ->check(CLI::PositiveNumber);
    mc->add_option("--seed", seed, "RNG seed")->required();
    mc->add_option("--barrier", barrier, "escape barrier (profitable case; 0 = automatic)");
    mc->add_option("--bridge-tol", bridge_tol, "crossing-time bisection tolerance");
    mc->add_option("--out", out, "also write the table to this file");

    CLI::App* check = app.add_subcommand("check", "identity diagnostics for a model config");
    check->add_option("--config", config, "model config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (mom->parsed()) return cmd_moments(config, x, k, method);
        if (curve->parsed()) return cmd_curve(config, x_min, x_max, steps, k, method, out);
        if (mc->parsed()) return cmd_mc(config, x, paths, seed, barrier, bridge_tol, out);
        return cmd_check(config);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s: %s\n", domain_error_name(e), e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
