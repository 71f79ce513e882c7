#pragma once

#include "epa/series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace epa {

enum class Kernel { rectangular, bartlett, ewc, wpe };

[[nodiscard]] std::string to_string(Kernel kernel);

/// A long-run variance estimate together with how it was produced.
struct LrvEstimate {
    double value = 0.0;
    Kernel kernel = Kernel::bartlett;
    /// M for bartlett, B for ewc, m for wpe; the truncation lag h-1 for rectangular.
    int bandwidth = 0;
    /// value <= 0. Only reachable for the rectangular kernel.
    bool nonpositive = false;
};

/**
 * Bandwidth selection rules.
 *
 *  - llsw:        ceil(1.3 sqrt(P))
 *  - nw1994:      ceil(4 (P/100)^(2/9))
 *  - textbook:    ceil(0.75 P^(1/3))
 *  - ci_baseline: floor(sqrt(P))
 *  - ewc_default: floor(0.4 P^(2/3))
 *  - wpe_default: floor(P^(1/3))
 *  - fixed:       a user-supplied value, validated where it is applied
 */
class BandwidthRule {
public:
    enum class Kind { llsw, nw1994, textbook, ci_baseline, ewc_default, wpe_default, fixed };

    constexpr BandwidthRule(Kind kind) noexcept : kind_(kind) {}  // NOLINT(implicit)
    static constexpr BandwidthRule explicit_value(int value) noexcept {
        BandwidthRule r(Kind::fixed);
        r.value_ = value;
        return r;
    }

    [[nodiscard]] constexpr Kind kind() const noexcept { return kind_; }
    [[nodiscard]] constexpr int value() const noexcept { return value_; }

    friend constexpr bool operator==(BandwidthRule, BandwidthRule) = default;

private:
    Kind kind_;
    int value_ = 0;
};

[[nodiscard]] std::string to_string(BandwidthRule rule);
/// Accepts llsw, nw, nw1994, textbook, ci, ci_baseline, ewc, wpe, or the package
/// option numbers 1..4 (1 = llsw, 2 = nw1994, 3 = textbook, 4 = ci_baseline).
[[nodiscard]] BandwidthRule parse_bandwidth_rule(const std::string& name);

/// Resolves a rule at sample size P (P >= 2). Rule-based results are clamped to
/// [1, P-1], and to [1, floor(P/2)] for wpe_default. Explicit values pass through.
[[nodiscard]] int bandwidth(BandwidthRule rule, std::size_t P);

/// gamma_0 + 2 sum_{j=1}^{h-1} gamma_j. Can be negative; see LrvEstimate::nonpositive.
[[nodiscard]] LrvEstimate lrv_rectangular(const LossSeries& d, int h);

/// gamma_0 + 2 sum_{j=1}^{M-1} (1 - j/M) gamma_j, 1 <= M <= P-1.
[[nodiscard]] LrvEstimate lrv_bartlett(const LossSeries& d, int M);

/// (1/B) sum_{j=1}^B lambda_j^2 over type-II cosine coefficients, 1 <= B <= P-1.
[[nodiscard]] LrvEstimate lrv_ewc(const LossSeries& d, int B);

/// (2 pi / m) sum_{j=1}^m I(2 pi j / P), 1 <= m <= floor(P/2).
[[nodiscard]] LrvEstimate lrv_wpe(const LossSeries& d, int m);

/// Bartlett weighting of precomputed autocovariances (gamma.size() > M - 1).
[[nodiscard]] double bartlett_from_autocovariances(std::span<const double> gamma, int M);

}  // namespace epa
