#pragma once

// Deliberately naive reference implementations used as test oracles. They share
// no code with the library and favour transparency over speed.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Real = long double;

inline Real mean(const std::vector<double>& d) {
    Real s = 0;
    for (double v : d) s += v;
    return s / static_cast<Real>(d.size());
}

inline Real autocov(const std::vector<double>& d, std::size_t j) {
    const Real m = mean(d);
    Real s = 0;
    for (std::size_t t = 0; t + j < d.size(); ++t) s += (d[t] - m) * (d[t + j] - m);
    return s / static_cast<Real>(d.size());
}

inline double rectangular(const std::vector<double>& d, int h) {
    Real v = autocov(d, 0);
    for (int j = 1; j <= h - 1; ++j) v += 2 * autocov(d, static_cast<std::size_t>(j));
    return static_cast<double>(v);
}

inline double bartlett(const std::vector<double>& d, int M) {
    // Full Eq-(4)-style sum over every lag, with the kernel switching itself off.
    Real v = autocov(d, 0);
    for (std::size_t j = 1; j < d.size(); ++j) {
        const Real x = static_cast<Real>(j) / M;
        const Real k = x < 1 ? 1 - x : 0;
        if (k != 0) v += 2 * k * autocov(d, j);
    }
    return static_cast<double>(v);
}

inline double ewc(const std::vector<double>& d, int B) {
    const std::size_t P = d.size();
    Real v = 0;
    for (int j = 1; j <= B; ++j) {
        Real lambda = 0;
        for (std::size_t t = 1; t <= P; ++t) {
            lambda += d[t - 1] * std::cos(std::numbers::pi_v<Real> * j * (t - 0.5L) / P);
        }
        lambda *= std::sqrt(2.0L / P);
        v += lambda * lambda;
    }
    return static_cast<double>(v / B);
}

inline double periodogram(const std::vector<double>& d, std::size_t j) {
    const std::size_t P = d.size();
    const Real m = mean(d);
    Real re = 0;
    Real im = 0;
    const Real w = 2 * std::numbers::pi_v<Real> * j / P;
    for (std::size_t t = 1; t <= P; ++t) {
        re += (d[t - 1] - m) * std::cos(w * t);
        im -= (d[t - 1] - m) * std::sin(w * t);
    }
    return static_cast<double>((re * re + im * im) / (2 * std::numbers::pi_v<Real> * P));
}

inline double wpe(const std::vector<double>& d, int m) {
    Real s = 0;
    for (int j = 1; j <= m; ++j) s += periodogram(d, static_cast<std::size_t>(j));
    return static_cast<double>(2 * std::numbers::pi_v<Real> * s / m);
}

// Composite Simpson rule in extended precision.
template <typename F>
Real simpson(F f, Real a, Real b, int n = 20000) {
    const Real h = (b - a) / n;
    Real s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

inline double normal_cdf(double x) {
    auto phi = [](Real u) { return std::exp(-u * u / 2) / std::sqrt(2 * std::numbers::pi_v<Real>); };
    const Real half = simpson(phi, 0, std::fabs(static_cast<Real>(x)));
    return static_cast<double>(x >= 0 ? 0.5L + half : 0.5L - half);
}

inline double student_t_cdf(double x, double nu) {
    const Real n = nu;
    const Real c = std::exp(std::lgamma((n + 1) / 2) - std::lgamma(n / 2)) / std::sqrt(n * std::numbers::pi_v<Real>);
    auto f = [&](Real u) { return c * std::pow(1 + u * u / n, -(n + 1) / 2); };
    const Real half = simpson(f, 0, std::fabs(static_cast<Real>(x)));
    return static_cast<double>(x >= 0 ? 0.5L + half : 0.5L - half);
}

inline std::vector<double> gaussian(std::size_t n, std::mt19937_64& rng, double mean = 0.0, double sd = 1.0) {
    std::normal_distribution<double> z(mean, sd);
    std::vector<double> out(n);
    for (double& v : out) v = z(rng);
    return out;
}

// AR(1) with a nonzero mean, a typical serially correlated loss differential.
inline std::vector<double> ar1(std::size_t n, double phi, double mean, std::mt19937_64& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> out(n);
    double x = 0.0;
    for (int k = 0; k < 200; ++k) x = phi * x + z(rng);
    for (double& v : out) {
        x = phi * x + z(rng);
        v = mean + x;
    }
    return out;
}

inline double relative_error(double got, double want) {
    const double scale = std::max(std::fabs(want), 1e-300);
    return std::fabs(got - want) / scale;
}

}  // namespace oracle
