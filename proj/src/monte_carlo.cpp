#include "ruin/monte_carlo.hpp"

#include <algorithm>
#include <cmath>

#include "ruin/errors.hpp"
#include "ruin/moments.hpp"

namespace ruin {

namespace {

// First-crossing time below 0 for a Brownian bridge of length `len` from
// level a > 0 to level b, given that a crossing occurs. Each step halves the
// interval: the midpoint is drawn from its exact law conditioned on the
// crossing, then the crossing is attributed to one half. Resolution stops at
// bridge_tol, returning the midpoint of the remaining interval.
double bridge_crossing_time(double a, double b, double len, double sigma2, double bridge_tol,
                            Xoshiro256pp& rng) {
    double offset = 0.0;
    while (len >= bridge_tol) {
        const double mu = 0.5 * (a + b);
        const double sd = std::sqrt(0.25 * sigma2 * len);
        double mid;
        if (b <= 0.0) {
            // endpoint already below: crossing is certain, midpoint law is the
            // plain bridge Gaussian
            mid = mu + sd * rng.normal();
        } else {
            // both endpoints positive: sample the midpoint conditioned on a
            // sub-interval minimum <= 0 by mixture-envelope rejection. The
            // envelope e^{-c1 m} + e^{-c2 m} of the crossing probability
            // q(m) = p1 + p2 - p1 p2 tilts the Gaussian into two components
            // of equal weight, and the acceptance rate is exactly 1/2.
            const double c1 = 4.0 * a / (sigma2 * len);
            const double c2 = 4.0 * b / (sigma2 * len);
            for (;;) {
                const double c = (rng.uniform() < 0.5) ? c1 : c2;
                const double m = mu - c * sd * sd + sd * rng.normal();
                double q;
                if (m <= 0.0) {
                    q = 1.0;
                } else {
                    const double p1 = std::exp(-c1 * m), p2 = std::exp(-c2 * m);
                    q = p1 + p2 - p1 * p2;
                }
                const double g = std::exp(-c1 * m) + std::exp(-c2 * m);
                if (rng.uniform() * g <= q) {
                    mid = m;
                    break;
                }
            }
        }

        double p_left; // probability the first crossing lies in the left half
        if (mid <= 0.0) {
            p_left = 1.0;
        } else if (b <= 0.0) {
            p_left = std::exp(-4.0 * a * mid / (sigma2 * len));
        } else {
            const double ea = 4.0 * a * mid / (sigma2 * len);
            const double eb = 4.0 * mid * b / (sigma2 * len);
            if (ea > 700.0 && eb > 700.0) {
                p_left = 1.0 / (1.0 + std::exp(std::clamp(ea - eb, -700.0, 700.0)));
            } else {
                const double p1 = std::exp(-ea), p2 = std::exp(-eb);
                p_left = p1 / (p1 + p2 - p1 * p2);
            }
        }

        len *= 0.5;
        if (mid <= 0.0 || rng.uniform() < p_left) {
            b = mid; // left half; conditioning carries over
        } else {
            offset += len;
            a = mid; // right half; the original b (crossing status) is kept
        }
    }
    return offset + 0.5 * len;
}

} // namespace

PathOutcome simulate_path(const RiskModel& model, double x, const McConfig& config,
                          Xoshiro256pp& stream) {
    const double p = model.premium(), s2 = model.sigma2(), lam = model.lambda();
    if (x < 0.0 || (s2 > 0.0 && x == 0.0))
        throw InvalidStart("simulate_path: need x > 0 when sigma2 > 0, x >= 0 otherwise");
    const double barrier = config.barrier;
    const double sigma = std::sqrt(s2);

    double level = x, t = 0.0;
    for (std::int64_t events = 0; events < config.max_events; ++events) {
        const double dt = (lam > 0.0) ? stream.exponential(lam) : 1.0;
        if (s2 == 0.0) {
            t += dt;
            level += p * dt - model.claims().sample(stream);
            if (level < 0.0) return {PathOutcome::Kind::Ruined, t, level};
        } else {
            const double z = level + p * dt + sigma * std::sqrt(dt) * stream.normal();
            bool crossed = z <= 0.0;
            if (!crossed) {
                const double p_cross = std::exp(-2.0 * level * z / (s2 * dt));
                crossed = stream.uniform() < p_cross;
            }
            if (crossed) {
                const double hit =
                    bridge_crossing_time(level, z, dt, s2, config.bridge_tol, stream);
                return {PathOutcome::Kind::Ruined, t + hit, 0.0};
            }
            t += dt;
            level = z - (lam > 0.0 ? model.claims().sample(stream) : 0.0);
            if (level <= 0.0) return {PathOutcome::Kind::Ruined, t, level};
        }
        if (barrier > 0.0 && level >= barrier) return {PathOutcome::Kind::Escaped, t, level};
    }
    return {PathOutcome::Kind::Censored, t, level};
}

McEstimate estimate(const RiskModel& model, double x, const McConfig& config) {
    if (config.n_paths <= 0) throw ConfigError("estimate: n_paths must be positive");
    const Regime regime = model.classify();

    McConfig cfg = config;
    if (!regime.unprofitable() && cfg.barrier <= 0.0) cfg.barrier = default_barrier(model);
    if (regime.unprofitable()) cfg.barrier = 0.0; // ruin is certain; never stop early

    McEstimate est;
    est.n_paths = cfg.n_paths;
    est.barrier_used = cfg.barrier;

    // compensated sums of tau and tau^2 (and their squares, for the SEs)
    double s1 = 0.0, c1 = 0.0, s2 = 0.0, c2 = 0.0, s4 = 0.0, c4 = 0.0;
    const auto kahan = [](double& sum, double& comp, double value) {
        const double y = value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };

    for (std::int64_t i = 0; i < cfg.n_paths; ++i) {
        Xoshiro256pp stream = Xoshiro256pp::substream(cfg.seed, static_cast<std::uint64_t>(i));
        const PathOutcome out = simulate_path(model, x, cfg, stream);
        switch (out.kind) {
            case PathOutcome::Kind::Ruined: {
                ++est.n_ruined;
                const double tau = out.ruin_time;
                kahan(s1, c1, tau);
                kahan(s2, c2, tau * tau);
                kahan(s4, c4, tau * tau * tau * tau);
                break;
            }
            case PathOutcome::Kind::Escaped: ++est.n_escaped; break;
            case PathOutcome::Kind::Censored: ++est.n_censored; break;
        }
    }

    const double n = static_cast<double>(est.n_paths);
    const double phat = static_cast<double>(est.n_ruined) / n;
    est.ruin_prob_hat = phat;
    est.ruin_prob_se = std::sqrt(phat * (1.0 - phat) / n);
    if (est.n_ruined == 0)
        throw NoRuinObserved("estimate: no ruined path among " + std::to_string(est.n_paths));

    const double m = static_cast<double>(est.n_ruined);
    est.mean_hat = s1 / m;
    est.second_hat = s2 / m;
    if (est.n_ruined > 1) {
        const double var_tau = std::max(0.0, (s2 - m * est.mean_hat * est.mean_hat) / (m - 1.0));
        const double var_tau2 =
            std::max(0.0, (s4 - m * est.second_hat * est.second_hat) / (m - 1.0));
        est.mean_se = std::sqrt(var_tau / m);
        est.second_se = std::sqrt(var_tau2 / m);
    }

    if (est.n_escaped > 0)
        est.bias_bound =
            ruin_probability(model, cfg.barrier) * static_cast<double>(est.n_escaped) / n;
    return est;
}

double default_barrier(const RiskModel& model) {
    double hi = 1.0;
    while (ruin_probability(model, hi) >= 1e-8) {
        hi *= 2.0;
        if (hi > 1e9) return hi; // pathological; keep the caller moving
    }
    double lo = hi * 0.5;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ruin_probability(model, mid) >= 1e-8 ? lo : hi) = mid;
        if (hi - lo < 0.01 * hi) break;
    }
    return hi;
}

std::optional<double> diffusion_first_passage(double p, double sigma2, double x, double horizon,
                                              double bridge_tol, Xoshiro256pp& rng) {
    if (x <= 0.0 || sigma2 <= 0.0 || horizon <= 0.0)
        throw InvalidStart("diffusion_first_passage: need x > 0, sigma2 > 0, horizon > 0");
    const double z = x + p * horizon + std::sqrt(sigma2 * horizon) * rng.normal();
    bool crossed = z <= 0.0;
    if (!crossed) crossed = rng.uniform() < std::exp(-2.0 * x * z / (sigma2 * horizon));
    if (!crossed) return std::nullopt;
    return bridge_crossing_time(x, z, horizon, sigma2, bridge_tol, rng);
}

} // namespace ruin
