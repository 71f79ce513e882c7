#include "epa/distributions.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <stdexcept>

namespace epa::dist {

namespace {

const boost::math::normal_distribution<double>& standard_normal() {
    static const boost::math::normal_distribution<double> n(0.0, 1.0);
    return n;
}

void check_df(double df) {
    if (!(df > 0.0)) throw std::invalid_argument("Student-t degrees of freedom must be positive");
}

void check_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile probability must lie in (0, 1)");
}

}  // namespace

double normal_cdf(double x) {
    return boost::math::cdf(standard_normal(), x);
}

double normal_quantile(double p) {
    check_probability(p);
    return boost::math::quantile(standard_normal(), p);
}

double student_t_cdf(double x, double df) {
    check_df(df);
    return boost::math::cdf(boost::math::students_t_distribution<double>(df), x);
}

double student_t_quantile(double p, double df) {
    check_df(df);
    check_probability(p);
    return boost::math::quantile(boost::math::students_t_distribution<double>(df), p);
}

double normal_two_sided_pvalue(double x) {
    return 2.0 * boost::math::cdf(boost::math::complement(standard_normal(), std::abs(x)));
}

double student_t_two_sided_pvalue(double x, double df) {
    check_df(df);
    const boost::math::students_t_distribution<double> t(df);
    return 2.0 * boost::math::cdf(boost::math::complement(t, std::abs(x)));
}

}  // namespace epa::dist
