#pragma once

#include "epa/dm_tests.hpp"
#include "epa/mc.hpp"
#include "epa/tradeoff.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>

namespace epa::report {

inline constexpr const char* kSoftwareVersion = "0.1.0";

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

struct RunManifest {
    std::string command;  // test, tradeoff or mc
    std::map<std::string, std::string> parameters;
    std::uint64_t seed = 0;
    std::string software_version = kSoftwareVersion;

    friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

[[nodiscard]] nlohmann::json to_json(const RunManifest& manifest);
[[nodiscard]] RunManifest manifest_from_json(const nlohmann::json& j);

/// {method, stat, pval, rej, cl, bandwidth, df, critical_value}; absent optionals are null.
[[nodiscard]] nlohmann::json to_json(const TestOutcome& outcome);
[[nodiscard]] TestOutcome outcome_from_json(const nlohmann::json& j);
[[nodiscard]] Method parse_method_name(const std::string& name);

/// Aligned comparison row, e.g. "DM-R:   2.79  (reject)".
[[nodiscard]] std::string text_row(const TestOutcome& outcome);

/// Columns M, size_distortion, max_power_loss, rejected.
[[nodiscard]] std::string tradeoff_csv(const TradeoffCurve& curve);
[[nodiscard]] nlohmann::json tradeoff_json(const TradeoffCurve& curve, const RunManifest& manifest);
/// max_power_loss on x, size_distortion on y; crosses reject, circles do not, the default M is ringed.
[[nodiscard]] std::string tradeoff_svg(const TradeoffCurve& curve);

enum class McMetric { size, power };
[[nodiscard]] std::string to_string(McMetric metric);

/**
 * One appendix-style table: a row per (R, R_tilde) present for `family`, a
 * `diagonal` flag, then one column per (h, P) named "h<h>_P<P>". Cells with
 * no design (or, for power, no diagonal cell) are left empty.
 */
[[nodiscard]] std::string mc_matrix_csv(const mc::ExperimentResult& result, mc::Family family,
                                        McMetric metric, mc::McMethod method);

/// File name used by the mc command, e.g. "ucr_size_DM-NW-L.csv".
[[nodiscard]] std::string mc_matrix_filename(mc::Family family, McMetric metric, mc::McMethod method);

}  // namespace epa::report
