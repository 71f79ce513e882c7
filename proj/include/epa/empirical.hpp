#pragma once

#include <span>

namespace epa {

/// Size-corrected critical value: the order statistic at 1-based index
/// ceil(0.95 n) of the sorted absolute statistics. Throws on empty input.
[[nodiscard]] double size_corrected_critical_value(std::span<const double> abs_stats);

}  // namespace epa
