#pragma once

namespace epa::dist {

[[nodiscard]] double normal_cdf(double x);
[[nodiscard]] double normal_quantile(double p);

/// Student-t with df > 0 degrees of freedom.
[[nodiscard]] double student_t_cdf(double x, double df);
[[nodiscard]] double student_t_quantile(double p, double df);

// Two-sided p-values, 2 * P(X > |x|), computed on the upper tail directly.
[[nodiscard]] double normal_two_sided_pvalue(double x);
[[nodiscard]] double student_t_two_sided_pvalue(double x, double df);

}  // namespace epa::dist
