#pragma once

#include <cstdint>
#include <optional>

#include "ruin/risk_model.hpp"
#include "ruin/rng.hpp"

namespace ruin {

struct McConfig {
    std::int64_t n_paths = 0;
    std::uint64_t seed = 0;
    double barrier = 0.0;      // profitable-case stopping level; 0 = pick automatically
    double bridge_tol = 1e-6;  // crossing-time bisection tolerance (time units)
    std::int64_t max_events = 10'000'000; // claim-arrival cap per path before censoring
};

struct PathOutcome {
    enum class Kind { Ruined, Escaped, Censored };
    Kind kind = Kind::Censored;
    double ruin_time = 0.0; // set when Ruined
    double level = 0.0;     // set when Escaped
};

struct McEstimate {
    double ruin_prob_hat = 0.0, ruin_prob_se = 0.0;
    double mean_hat = 0.0, mean_se = 0.0;
    double second_hat = 0.0, second_se = 0.0;
    std::int64_t n_paths = 0, n_ruined = 0, n_escaped = 0, n_censored = 0;
    double barrier_used = 0.0;
    double bias_bound = 0.0; // ruin_probability(model, barrier) * n_escaped/n_paths
};

// One trajectory of the perturbed risk process started at x. sigma2 = 0
// evolves jump to jump (ruin can only happen at claim instants). sigma2 > 0
// draws the Gaussian level at each claim instant and decides an intra-interval
// crossing by the exact Brownian-bridge probability exp(-2 y z / (sigma2 E));
// a detected crossing time is located by recursive bridge bisection down to
// bridge_tol, sampling each midpoint from its exact conditioned law. In the
// profitable regime the path stops as Escaped once the level reaches the
// barrier. Throws InvalidStart when x < 0, or x = 0 with sigma2 > 0.
PathOutcome simulate_path(const RiskModel& model, double x, const McConfig& config,
                          Xoshiro256pp& stream);

// Runs n_paths with per-path substreams of config.seed and aggregates ruin
// probability and conditional ruin-time moments with standard errors.
// Throws NoRuinObserved when no path ruins.
McEstimate estimate(const RiskModel& model, double x, const McConfig& config);

// Smallest level U (up to ~1% granularity) with ruin_probability(model, U)
// below 1e-8; used as the automatic profitable-case barrier.
double default_barrier(const RiskModel& model);

// Test hook: first-passage time below 0 of x + p t + sigma B_t within
// `horizon`, using the same bridge machinery as simulate_path; empty when the
// level stays positive. Exact in distribution up to bridge_tol.
std::optional<double> diffusion_first_passage(double p, double sigma2, double x, double horizon,
                                              double bridge_tol, Xoshiro256pp& rng);

} // namespace ruin
