#include "epa/series.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace epa {

namespace detail {

double compensated_sum(std::span<const double> x) noexcept {
    double sum = 0.0;
    double c = 0.0;
    for (double v : x) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    return sum + c;
}

double compensated_dot(std::span<const double> x, std::span<const double> y) noexcept {
    double sum = 0.0;
    double c = 0.0;
    const std::size_t n = x.size() < y.size() ? x.size() : y.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i] * y[i];
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    return sum + c;
}

}  // namespace detail

Loss parse_loss(const std::string& name) {
    if (name == "squared" || name == "se") return Loss::squared;
    if (name == "absolute" || name == "ae") return Loss::absolute;
    throw std::invalid_argument("unknown loss function '" + name + "' (expected squared or absolute)");
}

std::string to_string(Loss loss) {
    return loss == Loss::squared ? "squared" : "absolute";
}

LossSeries::LossSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw std::invalid_argument("loss series needs at least 2 observations, got " +
                                    std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("loss series has a non-finite value at position " +
                                        std::to_string(i + 1));
        }
    }
}

double LossSeries::mean() const noexcept {
    return detail::compensated_sum(values_) / static_cast<double>(values_.size());
}

LossSeries LossSeries::scaled(double c) const {
    std::vector<double> out(values_);
    for (double& v : out) v *= c;
    return LossSeries(std::move(out));
}

LossSeries LossSeries::shifted(double c) const {
    std::vector<double> out(values_);
    for (double& v : out) v += c;
    return LossSeries(std::move(out));
}

LossSeries loss_differential(std::span<const double> errors1, std::span<const double> errors2,
                             Loss loss) {
    if (errors1.size() != errors2.size()) {
        throw std::invalid_argument("forecast error sequences differ in length (" +
                                    std::to_string(errors1.size()) + " vs " +
                                    std::to_string(errors2.size()) + ")");
    }
    std::vector<double> d(errors1.size());
    for (std::size_t t = 0; t < d.size(); ++t) {
        if (loss == Loss::squared) {
            d[t] = errors1[t] * errors1[t] - errors2[t] * errors2[t];
        } else {
            d[t] = std::abs(errors1[t]) - std::abs(errors2[t]);
        }
    }
    return LossSeries(std::move(d));
}

namespace {

std::vector<double> centered(const LossSeries& d) {
    const double m = d.mean();
    std::vector<double> x(d.values().begin(), d.values().end());
    for (double& v : x) v -= m;
    return x;
}

}  // namespace

Autocovariances autocovariance(const LossSeries& d, std::size_t maxlag) {
    const std::size_t n = d.size();
    if (maxlag > n - 1) {
        throw std::out_of_range("autocovariance lag " + std::to_string(maxlag) +
                                " exceeds P-1 = " + std::to_string(n - 1));
    }
    Autocovariances out;
    out.mean = d.mean();
    const std::vector<double> x = centered(d);
    const std::span<const double> xs(x);
    out.gamma.resize(maxlag + 1);
    for (std::size_t j = 0; j <= maxlag; ++j) {
        out.gamma[j] = detail::compensated_dot(xs.first(n - j), xs.subspan(j)) /
                       static_cast<double>(n);
    }
    return out;
}

double periodogram(const LossSeries& d, std::size_t j) {
    const std::size_t n = d.size();
    if (j < 1 || j > n / 2) {
        throw std::out_of_range("periodogram index " + std::to_string(j) + " outside [1, " +
                                std::to_string(n / 2) + "]");
    }
    // Centering is exact at nonzero Fourier frequencies and keeps the sums small.
    const std::vector<double> x = centered(d);
    std::vector<double> re(n);
    std::vector<double> im(n);
    for (std::size_t t = 1; t <= n; ++t) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * t) % n) /
                             static_cast<double>(n);
        re[t - 1] = x[t - 1] * std::cos(angle);
        im[t - 1] = -x[t - 1] * std::sin(angle);
    }
    const double a = detail::compensated_sum(re);
    const double b = detail::compensated_sum(im);
    return (a * a + b * b) / (2.0 * std::numbers::pi * static_cast<double>(n));
}

double cosine_coefficient(const LossSeries& d, std::size_t j) {
    const std::size_t n = d.size();
    if (j < 1 || j > n - 1) {
        throw std::out_of_range("cosine coefficient index " + std::to_string(j) +
                                " outside [1, " + std::to_string(n - 1) + "]");
    }
    const std::vector<double> x = centered(d);
    std::vector<double> terms(n);
    const std::size_t period = 4 * n;
    for (std::size_t t = 1; t <= n; ++t) {
        // pi * j * (t - 1/2) / P = pi * (j * (2t - 1) mod 4P) / (2P)
        const std::size_t k = (j * (2 * t - 1)) % period;
        const double angle = std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n));
        terms[t - 1] = x[t - 1] * std::cos(angle);
    }
    return std::sqrt(2.0 / static_cast<double>(n)) * detail::compensated_sum(terms);
}

}  // namespace epa
