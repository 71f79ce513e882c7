#include "epa/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace epa {

double size_corrected_critical_value(std::span<const double> abs_stats) {
    if (abs_stats.empty()) throw std::invalid_argument("size correction needs at least one statistic");
    std::vector<double> sorted(abs_stats.begin(), abs_stats.end());
    // ceil(0.95 n) in integer arithmetic: (95 n + 99) / 100.
    const std::size_t n = sorted.size();
    const std::size_t rank = (95 * n + 99) / 100;
    const auto kth = sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(sorted.begin(), kth, sorted.end());
    return *kth;
}

}  // namespace epa
