#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace epa {

enum class Loss { squared, absolute };

[[nodiscard]] Loss parse_loss(const std::string& name);
[[nodiscard]] std::string to_string(Loss loss);

/**
 * @brief Evaluation-period loss differential d_1..d_P.
 *
 * Holds at least two finite values. Missing data must be resolved before
 * construction (see io.hpp).
 */
class LossSeries {
public:
    explicit LossSeries(std::vector<double> values);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Sample mean, compensated summation.
    [[nodiscard]] double mean() const noexcept;

    [[nodiscard]] LossSeries scaled(double c) const;
    [[nodiscard]] LossSeries shifted(double c) const;

private:
    std::vector<double> values_;
};

/// Biased sample autocovariances at lags 0..J, plus the sample mean they were centred on.
struct Autocovariances {
    std::vector<double> gamma;
    double mean = 0.0;
};

/// d_t = L(e1_t) - L(e2_t). Throws std::invalid_argument on length mismatch or length < 2.
[[nodiscard]] LossSeries loss_differential(std::span<const double> errors1,
                                           std::span<const double> errors2,
                                           Loss loss = Loss::squared);

/// gamma_j = P^{-1} sum_{t=1}^{P-j} (d_t - dbar)(d_{t+j} - dbar), j = 0..maxlag.
[[nodiscard]] Autocovariances autocovariance(const LossSeries& d, std::size_t maxlag);

/// Periodogram ordinate at the Fourier frequency 2*pi*j/P, 1 <= j <= floor(P/2).
[[nodiscard]] double periodogram(const LossSeries& d, std::size_t j);

/// Type-II cosine coefficient sqrt(2/P) sum_t d_t cos(pi j (t - 1/2) / P), 1 <= j <= P-1.
[[nodiscard]] double cosine_coefficient(const LossSeries& d, std::size_t j);

namespace detail {

/// Neumaier-compensated sum.
[[nodiscard]] double compensated_sum(std::span<const double> x) noexcept;

/// Compensated sum of x_t * y_t.
[[nodiscard]] double compensated_dot(std::span<const double> x, std::span<const double> y) noexcept;

}  // namespace detail

}  // namespace epa
