#include "epa/lrv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace epa {

namespace {

// Rule formulas can land within rounding of an integer (e.g. 1000^(1/3)); the
// slack keeps floor/ceil on the mathematically exact side.
constexpr double kRoundingSlack = 1e-9;

int ceil_rule(double x) { return static_cast<int>(std::ceil(x - kRoundingSlack)); }
int floor_rule(double x) { return static_cast<int>(std::floor(x + kRoundingSlack)); }

int clamp_bandwidth(int value, int upper) { return std::clamp(value, 1, std::max(1, upper)); }

LrvEstimate make_estimate(double value, Kernel kernel, int bandwidth) {
    return LrvEstimate{value, kernel, bandwidth, !(value > 0.0)};
}

void check_range(const char* what, int value, int lo, int hi) {
    if (value < lo || value > hi) {
        throw std::out_of_range(std::string(what) + " " + std::to_string(value) + " outside [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

}  // namespace

std::string to_string(Kernel kernel) {
    switch (kernel) {
        case Kernel::rectangular: return "rectangular";
        case Kernel::bartlett: return "bartlett";
        case Kernel::ewc: return "ewc";
        case Kernel::wpe: return "wpe";
    }
    return "unknown";
}

std::string to_string(BandwidthRule rule) {
    switch (rule.kind()) {
        case BandwidthRule::Kind::llsw: return "llsw";
        case BandwidthRule::Kind::nw1994: return "nw1994";
        case BandwidthRule::Kind::textbook: return "textbook";
        case BandwidthRule::Kind::ci_baseline: return "ci_baseline";
        case BandwidthRule::Kind::ewc_default: return "ewc_default";
        case BandwidthRule::Kind::wpe_default: return "wpe_default";
        case BandwidthRule::Kind::fixed: return "explicit(" + std::to_string(rule.value()) + ")";
    }
    return "unknown";
}

BandwidthRule parse_bandwidth_rule(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "llsw" || s == "1") return BandwidthRule::Kind::llsw;
    if (s == "nw" || s == "nw1994" || s == "2") return BandwidthRule::Kind::nw1994;
    if (s == "textbook" || s == "3") return BandwidthRule::Kind::textbook;
    if (s == "ci" || s == "ci_baseline" || s == "4") return BandwidthRule::Kind::ci_baseline;
    if (s == "ewc" || s == "ewc_default") return BandwidthRule::Kind::ewc_default;
    if (s == "wpe" || s == "wpe_default") return BandwidthRule::Kind::wpe_default;
    throw std::invalid_argument("unknown bandwidth rule '" + name + "'");
}

int bandwidth(BandwidthRule rule, std::size_t P) {
    if (P < 2) throw std::invalid_argument("bandwidth rules need P >= 2");
    const double p = static_cast<double>(P);
    const int upper = static_cast<int>(P) - 1;
    switch (rule.kind()) {
        case BandwidthRule::Kind::llsw: return clamp_bandwidth(ceil_rule(1.3 * std::sqrt(p)), upper);
        case BandwidthRule::Kind::nw1994:
            return clamp_bandwidth(ceil_rule(4.0 * std::pow(p / 100.0, 2.0 / 9.0)), upper);
        case BandwidthRule::Kind::textbook: return clamp_bandwidth(ceil_rule(0.75 * std::cbrt(p)), upper);
        case BandwidthRule::Kind::ci_baseline: return clamp_bandwidth(floor_rule(std::sqrt(p)), upper);
        case BandwidthRule::Kind::ewc_default: {
            const double c = std::cbrt(p);
            return clamp_bandwidth(floor_rule(0.4 * c * c), upper);
        }
        case BandwidthRule::Kind::wpe_default:
            return clamp_bandwidth(floor_rule(std::cbrt(p)), static_cast<int>(P / 2));
        case BandwidthRule::Kind::fixed: return rule.value();
    }
    throw std::logic_error("unhandled bandwidth rule");
}

LrvEstimate lrv_rectangular(const LossSeries& d, int h) {
    const int n = static_cast<int>(d.size());
    check_range("rectangular horizon h", h, 1, n);
    const Autocovariances ac = autocovariance(d, static_cast<std::size_t>(h - 1));
    double lag_sum = 0.0;
    for (int j = 1; j < h; ++j) lag_sum += ac.gamma[static_cast<std::size_t>(j)];
    return make_estimate(ac.gamma[0] + 2.0 * lag_sum, Kernel::rectangular, h - 1);
}

double bartlett_from_autocovariances(std::span<const double> gamma, int M) {
    double lag_sum = 0.0;
    for (int j = 1; j < M; ++j) {
        lag_sum += (1.0 - static_cast<double>(j) / static_cast<double>(M)) *
                   gamma[static_cast<std::size_t>(j)];
    }
    return gamma[0] + 2.0 * lag_sum;
}

LrvEstimate lrv_bartlett(const LossSeries& d, int M) {
    const int n = static_cast<int>(d.size());
    check_range("Bartlett bandwidth M", M, 1, n - 1);
    const Autocovariances ac = autocovariance(d, static_cast<std::size_t>(M - 1));
    return make_estimate(bartlett_from_autocovariances(ac.gamma, M), Kernel::bartlett, M);
}

LrvEstimate lrv_ewc(const LossSeries& d, int B) {
    const int n = static_cast<int>(d.size());
    check_range("EWC bandwidth B", B, 1, n - 1);
    double sum = 0.0;
    for (int j = 1; j <= B; ++j) {
        const double lambda = cosine_coefficient(d, static_cast<std::size_t>(j));
        sum += lambda * lambda;
    }
    return make_estimate(sum / static_cast<double>(B), Kernel::ewc, B);
}

LrvEstimate lrv_wpe(const LossSeries& d, int m) {
    const int n = static_cast<int>(d.size());
    check_range("WPE bandwidth m", m, 1, n / 2);
    double sum = 0.0;
    for (int j = 1; j <= m; ++j) sum += periodogram(d, static_cast<std::size_t>(j));
    return make_estimate(2.0 * std::numbers::pi * sum / static_cast<double>(m), Kernel::wpe, m);
}

}  // namespace epa
