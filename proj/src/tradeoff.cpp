#include "epa/tradeoff.hpp"

#include "epa/distributions.hpp"
#include "epa/dm_tests.hpp"
#include "epa/empirical.hpp"
#include "epa/errors.hpp"
#include "epa/lrv.hpp"
#include "epa/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace epa {

namespace {

constexpr int kBurnIn = 500;
constexpr double kNominal = 0.05;

struct LeastSquaresFit {
    std::vector<double> coefficients;
    double sigma2 = 0.0;
};

// Regresses x_t on x_{t-1..t-p} for t in [first, n), no intercept.
LeastSquaresFit fit_lags(const std::vector<double>& x, int p, std::size_t first) {
    const std::size_t rows = x.size() - first;
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) y(static_cast<Eigen::Index>(r)) = x[first + r];
    LeastSquaresFit fit;
    if (p == 0) {
        fit.sigma2 = y.squaredNorm() / static_cast<double>(rows);
        return fit;
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows), p);
    for (std::size_t r = 0; r < rows; ++r) {
        for (int k = 1; k <= p; ++k) {
            X(static_cast<Eigen::Index>(r), k - 1) = x[first + r - static_cast<std::size_t>(k)];
        }
    }
    const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    fit.coefficients.assign(beta.data(), beta.data() + beta.size());
    fit.sigma2 = (y - X * beta).squaredNorm() / static_cast<double>(rows);
    return fit;
}

// Per-replication Bartlett statistics for a bandwidth grid, from null paths.
struct GridSimulation {
    std::size_t n_sim = 0;
    std::size_t width = 0;
    std::vector<double> stat;   // n_sim x width, row-major; 0 where degenerate
    std::vector<double> scale;  // sqrt(P) / sigma_hat; 0 where degenerate
    std::vector<char> degenerate;
    std::size_t degenerate_count = 0;
};

GridSimulation simulate_grid(const FittedArModel& model, std::size_t P, const std::vector<int>& grid,
                             int n_sim, std::uint64_t seed, unsigned workers) {
    GridSimulation sim;
    sim.n_sim = static_cast<std::size_t>(n_sim);
    sim.width = grid.size();
    sim.stat.assign(sim.n_sim * sim.width, 0.0);
    sim.scale.assign(sim.n_sim * sim.width, 0.0);
    sim.degenerate.assign(sim.n_sim * sim.width, 0);
    const int max_M = *std::max_element(grid.begin(), grid.end());
    const double root_p = std::sqrt(static_cast<double>(P));

    parallel_for(sim.n_sim, workers, [&](std::size_t i) {
        Engine rng = make_stream(seed, {static_cast<std::uint64_t>(i)});
        const LossSeries path(simulate_from_model(model, P, 0.0, rng));
        const Autocovariances ac = autocovariance(path, static_cast<std::size_t>(max_M - 1));
        for (std::size_t g = 0; g < sim.width; ++g) {
            const double lrv = bartlett_from_autocovariances(ac.gamma, grid[g]);
            const std::size_t slot = i * sim.width + g;
            if (lrv > 0.0) {
                sim.stat[slot] = root_p * ac.mean / std::sqrt(lrv);
                sim.scale[slot] = root_p / std::sqrt(lrv);
            } else {
                sim.degenerate[slot] = 1;
            }
        }
    });
    sim.degenerate_count = static_cast<std::size_t>(
        std::count(sim.degenerate.begin(), sim.degenerate.end(), char{1}));
    return sim;
}

double rejection_rate(const GridSimulation& sim, std::size_t g, std::size_t P, int M) {
    const double cv = fixed_b_critical_value(static_cast<double>(M) / static_cast<double>(P));
    std::size_t rejections = 0;
    for (std::size_t i = 0; i < sim.n_sim; ++i) {
        const std::size_t slot = i * sim.width + g;
        if (!sim.degenerate[slot] && std::abs(sim.stat[slot]) > cv) ++rejections;
    }
    return static_cast<double>(rejections) / static_cast<double>(sim.n_sim);
}

double power_loss(const GridSimulation& sim, std::size_t g, const FittedArModel& model,
                  std::size_t P, int grid_size) {
    std::vector<double> abs_null(sim.n_sim);
    for (std::size_t i = 0; i < sim.n_sim; ++i) abs_null[i] = std::abs(sim.stat[i * sim.width + g]);
    const double corrected_cv = size_corrected_critical_value(abs_null);

    // Linear shift grid whose last point gives oracle power >= 0.99.
    const double sigma = std::sqrt(model.implied_lrv);
    const double reach = dist::normal_quantile(0.975) + dist::normal_quantile(0.99);
    const double step = reach * sigma / std::sqrt(static_cast<double>(P)) / grid_size;

    double worst = 0.0;
    for (int k = 1; k <= grid_size; ++k) {
        const double shift = step * k;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < sim.n_sim; ++i) {
            const std::size_t slot = i * sim.width + g;
            if (sim.degenerate[slot]) continue;
            if (std::abs(sim.stat[slot] + shift * sim.scale[slot]) > corrected_cv) ++hits;
        }
        const double power = static_cast<double>(hits) / static_cast<double>(sim.n_sim);
        worst = std::max(worst, oracle_power(model.implied_lrv, P, shift) - power);
    }
    return std::clamp(worst, 0.0, 1.0);
}

void check_simulation_args(const FittedArModel& model, std::size_t P, int M, int n_sim) {
    if (P < 2) throw std::invalid_argument("simulation length P must be >= 2");
    if (M < 1 || static_cast<std::size_t>(M) > P - 1) {
        throw std::out_of_range("bandwidth M = " + std::to_string(M) + " outside [1, P-1]");
    }
    if (n_sim < 1) throw std::invalid_argument("n_sim must be positive");
    if (!is_stationary(model.coefficients)) throw std::invalid_argument("AR model is not stationary");
}

}  // namespace

bool is_stationary(const std::vector<double>& coefficients) {
    const auto p = static_cast<Eigen::Index>(coefficients.size());
    if (p == 0) return true;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index k = 0; k < p; ++k) companion(0, k) = coefficients[static_cast<std::size_t>(k)];
    for (Eigen::Index k = 1; k < p; ++k) companion(k, k - 1) = 1.0;
    const Eigen::VectorXcd eig = companion.eigenvalues();
    double radius = 0.0;
    for (Eigen::Index k = 0; k < eig.size(); ++k) radius = std::max(radius, std::abs(eig(k)));
    return radius < 1.0;
}

FittedArModel fit_ar(const LossSeries& d, int max_order) {
    const std::size_t n = d.size();
    if (max_order < 0) throw std::invalid_argument("max AR order must be >= 0");
    if (n < 2 * static_cast<std::size_t>(max_order) + 2) {
        throw std::invalid_argument("AR fit up to order " + std::to_string(max_order) +
                                    " needs at least " + std::to_string(2 * max_order + 2) +
                                    " observations, got " + std::to_string(n));
    }
    FittedArModel model;
    model.sample_mean = d.mean();
    std::vector<double> x(d.values().begin(), d.values().end());
    for (double& v : x) v -= model.sample_mean;

    const double variance = autocovariance(d, 0).gamma[0];
    if (!(variance > 0.0)) {
        model.innovation_variance = 0.0;
        model.implied_lrv = 0.0;
        return model;
    }

    // AIC over a common estimation sample so the criteria are comparable.
    const auto common_start = static_cast<std::size_t>(max_order);
    int best = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= max_order; ++p) {
        const LeastSquaresFit fit = fit_lags(x, p, common_start);
        const double aic = static_cast<double>(n) * std::log(fit.sigma2) + 2.0 * p;
        if (aic < best_aic) {
            best_aic = aic;
            best = p;
        }
    }

    for (int p = best; p >= 0; --p) {
        LeastSquaresFit fit = fit_lags(x, p, static_cast<std::size_t>(p));
        if (p == 0) fit.sigma2 = variance;
        if (!is_stationary(fit.coefficients)) {
            model.fell_back = true;
            continue;
        }
        model.order = p;
        model.coefficients = std::move(fit.coefficients);
        model.innovation_variance = fit.sigma2;
        break;
    }
    const double phi_sum = std::accumulate(model.coefficients.begin(), model.coefficients.end(), 0.0);
    model.implied_lrv = model.innovation_variance / ((1.0 - phi_sum) * (1.0 - phi_sum));
    return model;
}

std::vector<double> simulate_from_model(const FittedArModel& model, std::size_t P, double shift,
                                        Engine& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(model.innovation_variance);
    const std::size_t p = model.coefficients.size();
    const std::size_t total = static_cast<std::size_t>(kBurnIn) + P;
    std::vector<double> x(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        double v = sd * normal(rng);
        for (std::size_t k = 1; k <= p && k <= t; ++k) v += model.coefficients[k - 1] * x[t - k];
        x[t] = v;
    }
    std::vector<double> out(x.begin() + kBurnIn, x.end());
    for (double& v : out) v += shift;
    return out;
}

std::vector<double> simulate_from_model(const FittedArModel& model, std::size_t P, double shift,
                                        std::uint64_t seed) {
    Engine rng = make_stream(seed, {});
    return simulate_from_model(model, P, shift, rng);
}

double oracle_power(double true_lrv, std::size_t P, double shift) {
    if (!(true_lrv > 0.0)) throw std::invalid_argument("oracle power needs a positive long-run variance");
    const double z = dist::normal_quantile(0.975);
    const double drift = shift * std::sqrt(static_cast<double>(P)) / std::sqrt(true_lrv);
    return dist::normal_cdf(-z + drift) + dist::normal_cdf(-z - drift);
}

double size_distortion(const FittedArModel& model, std::size_t P, int M, int n_sim,
                       std::uint64_t seed, unsigned workers) {
    check_simulation_args(model, P, M, n_sim);
    const std::vector<int> grid{M};
    const GridSimulation sim = simulate_grid(model, P, grid, n_sim, seed, workers);
    return rejection_rate(sim, 0, P, M) - kNominal;
}

double max_power_loss(const FittedArModel& model, std::size_t P, int M, int n_sim, int grid_size,
                      std::uint64_t seed, unsigned workers) {
    check_simulation_args(model, P, M, n_sim);
    if (grid_size < 1) throw std::invalid_argument("alternative grid size must be positive");
    if (!(model.implied_lrv > 0.0)) throw DegenerateVarianceError("AR-implied", model.order, model.implied_lrv);
    const std::vector<int> grid{M};
    const GridSimulation sim = simulate_grid(model, P, grid, n_sim, seed, workers);
    return power_loss(sim, 0, model, P, grid_size);
}

std::vector<int> default_bandwidth_grid(std::size_t P) {
    const int llsw = bandwidth(BandwidthRule::Kind::llsw, P);
    const int top = std::min(2 * llsw, static_cast<int>(P) - 1);
    std::vector<int> grid(static_cast<std::size_t>(top));
    std::iota(grid.begin(), grid.end(), 1);
    return grid;
}

TradeoffCurve build_tradeoff_curve(const LossSeries& observed, const TradeoffConfig& config) {
    const std::size_t P = observed.size();
    if (P < 10) throw std::invalid_argument("tradeoff diagnostic needs P >= 10, got " + std::to_string(P));
    if (config.n_sim < 100) throw std::invalid_argument("n_sim must be >= 100");
    if (config.alternative_grid_size < 1) throw std::invalid_argument("alternative grid size must be positive");

    std::vector<int> grid = config.bandwidth_grid.empty() ? default_bandwidth_grid(P) : config.bandwidth_grid;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (grid[g] < 1 || static_cast<std::size_t>(grid[g]) > P - 1) {
            throw std::out_of_range("grid bandwidth " + std::to_string(grid[g]) + " outside [1, P-1]");
        }
        if (g > 0 && grid[g] <= grid[g - 1]) throw std::invalid_argument("bandwidth grid must be increasing");
    }

    const double observed_variance = autocovariance(observed, 0).gamma[0];
    if (!(observed_variance > 0.0)) throw DegenerateVarianceError("sample", 0, observed_variance);

    TradeoffCurve curve;
    curve.P = P;
    curve.default_M = bandwidth(BandwidthRule::Kind::llsw, P);
    const int max_order = config.max_ar_order.value_or(std::min(10, static_cast<int>(P / 4)));
    curve.model = fit_ar(observed, max_order);

    const GridSimulation sim = simulate_grid(curve.model, P, grid, config.n_sim, config.seed, config.workers);
    curve.degenerate_simulations = sim.degenerate_count;
    curve.points.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        TradeoffPoint point;
        point.M = grid[g];
        point.size_distortion = rejection_rate(sim, g, P, grid[g]) - kNominal;
        point.max_power_loss = power_loss(sim, g, curve.model, P, config.alternative_grid_size);
        point.rejected = dm_test_bt_fb(observed, grid[g], BandwidthRule::Kind::llsw, kNominal).rej;
        curve.points.push_back(point);
    }
    return curve;
}

}  // namespace epa
