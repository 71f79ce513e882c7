#pragma once

#include "epa/random.hpp"
#include "epa/series.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace epa {

/**
 * Gaussian AR(p) approximation of the demeaned loss differential,
 * x_t = sum_k coefficients[k-1] x_{t-k} + e_t, Var(e_t) = innovation_variance.
 */
struct FittedArModel {
    int order = 0;
    std::vector<double> coefficients;
    double innovation_variance = 0.0;
    double sample_mean = 0.0;
    /// innovation_variance / (1 - sum(coefficients))^2
    double implied_lrv = 0.0;
    /// The AIC choice was nonstationary and a lower order was used instead.
    bool fell_back = false;
};

struct TradeoffPoint {
    int M = 0;
    /// Null rejection rate of the fixed-b Bartlett test minus 0.05.
    double size_distortion = 0.0;
    double max_power_loss = 0.0;
    /// Fixed-b Bartlett decision on the observed series at this M.
    bool rejected = false;
};

struct TradeoffConfig {
    /// Increasing bandwidths in [1, P-1]; empty selects {1, ..., min(2 ceil(1.3 sqrt P), P-1)}.
    std::vector<int> bandwidth_grid;
    int n_sim = 5000;
    int alternative_grid_size = 20;
    std::uint64_t seed = 20240101;
    /// Defaults to min(10, floor(P/4)).
    std::optional<int> max_ar_order;
    /// 0 = hardware concurrency. Results do not depend on this.
    unsigned workers = 0;
};

struct TradeoffCurve {
    std::vector<TradeoffPoint> points;
    FittedArModel model;
    /// Package default bandwidth ceil(1.3 sqrt P).
    int default_M = 0;
    std::size_t P = 0;
    /// Simulated series whose Bartlett variance was not positive (counted as non-rejections).
    std::size_t degenerate_simulations = 0;
};

/// Stationary AR(p) for p <= max_order selected by AIC = P log(sigma^2) + 2p.
/// Requires P >= 2 max_order + 2.
[[nodiscard]] FittedArModel fit_ar(const LossSeries& d, int max_order);

/// True when the companion matrix of `coefficients` has spectral radius < 1.
[[nodiscard]] bool is_stationary(const std::vector<double>& coefficients);

/// Length-P Gaussian path after 500 burn-in steps from zero, plus a constant shift.
[[nodiscard]] std::vector<double> simulate_from_model(const FittedArModel& model, std::size_t P,
                                                      double shift, Engine& rng);
[[nodiscard]] std::vector<double> simulate_from_model(const FittedArModel& model, std::size_t P,
                                                      double shift, std::uint64_t seed);

/// Power of the two-sided 5% z-test that knows the long-run variance.
[[nodiscard]] double oracle_power(double true_lrv, std::size_t P, double shift);

[[nodiscard]] double size_distortion(const FittedArModel& model, std::size_t P, int M, int n_sim,
                                     std::uint64_t seed, unsigned workers = 0);

[[nodiscard]] double max_power_loss(const FittedArModel& model, std::size_t P, int M, int n_sim,
                                    int grid_size, std::uint64_t seed, unsigned workers = 0);

/// Default grid for sample size P; always contains ceil(1.3 sqrt P).
[[nodiscard]] std::vector<int> default_bandwidth_grid(std::size_t P);

/// Size distortion, maximum power loss and observed decision at every grid bandwidth.
/// Requires P >= 10 and a non-constant series.
[[nodiscard]] TradeoffCurve build_tradeoff_curve(const LossSeries& observed,
                                                 const TradeoffConfig& config);

}  // namespace epa
