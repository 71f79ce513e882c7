#include "epa/dm_tests.hpp"
#include "epa/empirical.hpp"
#include "epa/errors.hpp"
#include "epa/mc.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

using namespace epa::mc;

namespace epa::mc {
void PrintTo(Family f, std::ostream* os) { *os << to_string(f); }
}  // namespace epa::mc

namespace {

// Mean and batch-means standard error; batches are much longer than the dependence range.
std::pair<double, double> mean_and_se(const std::vector<double>& x, std::size_t batches = 1000) {
    const std::size_t len = x.size() / batches;
    std::vector<double> means(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        means[b] = std::accumulate(x.begin() + b * len, x.begin() + (b + 1) * len, 0.0) / len;
    }
    const double m = std::accumulate(means.begin(), means.end(), 0.0) / batches;
    double ss = 0.0;
    for (double v : means) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / (batches - 1) / batches)};
}

}  // namespace

TEST(CalibrateMu, ClosedFormValues) {
    EXPECT_EQ(calibrate_mu(1, 25), 0.2);
    EXPECT_NEAR(calibrate_mu(3, 25), 0.34482, 1e-5);
    EXPECT_NEAR(calibrate_mu(3, 25), std::sqrt(74.3125 / 625.0), 1e-15);
    EXPECT_LT(calibrate_mu(1, 100000), 0.004);
    EXPECT_THROW(static_cast<void>(calibrate_mu(12, 11)), std::invalid_argument);
    EXPECT_THROW(static_cast<void>(calibrate_mu(0, 25)), std::invalid_argument);
}

class CalibrationOracle : public ::testing::TestWithParam<std::pair<int, int>> {};

// Independent brute-force check: an MA(h-1) target with intercept mu has equal
// expected squared error under the zero forecast and the R-window rolling mean.
TEST_P(CalibrationOracle, EqualExpectedLoss) {
    const auto [h, R] = GetParam();
    const double mu = calibrate_mu(h, R);
    std::mt19937_64 rng(1000 + 100 * h + R);
    const std::size_t n = 1000000;
    const std::size_t total = n + static_cast<std::size_t>(R + 2 * h);
    const auto eps = oracle::gaussian(total + static_cast<std::size_t>(h), rng);
    std::vector<double> y(total);
    for (std::size_t t = 0; t < total; ++t) {
        double v = mu;
        for (int k = 0; k < h; ++k) v += std::pow(0.5, k) * eps[t + static_cast<std::size_t>(h - k)];
        y[t] = v;
    }
    std::vector<double> d(n);
    double window = 0.0;
    for (int k = 0; k < R; ++k) window += y[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t origin = i + static_cast<std::size_t>(R) - 1;
        if (i > 0) window += y[origin] - y[origin - static_cast<std::size_t>(R)];
        const double target = y[origin + static_cast<std::size_t>(h)];
        const double e2 = target - window / R;
        d[i] = target * target - e2 * e2;
    }
    const auto [m, se] = mean_and_se(d);
    EXPECT_LT(std::fabs(m), 3.0 * se) << "mean " << m << " se " << se;
}

INSTANTIATE_TEST_SUITE_P(Grid, CalibrationOracle,
                         ::testing::Values(std::pair{1, 25}, std::pair{1, 75}, std::pair{3, 25}, std::pair{3, 75},
                                           std::pair{12, 25}, std::pair{12, 75}));

TEST(SimulateUcr, WhiteNoiseTargetMoments) {
    const DgpSpec spec = make_spec(Family::ucr, 1, 25, 25, 1000000);
    epa::Engine rng = epa::make_stream(3, {1});
    const ForecastPaths paths = simulate_ucr(spec, rng);
    ASSERT_EQ(paths.target.size(), 1000000u);
    const double m = std::accumulate(paths.target.begin(), paths.target.end(), 0.0) / 1e6;
    double ss = 0.0;
    for (double v : paths.target) ss += (v - m) * (v - m);
    EXPECT_NEAR(ss / 1e6, 1.0, 0.01);
    EXPECT_NEAR(m, 0.2, 0.005);
    for (double f : paths.f1) ASSERT_EQ(f, 0.0);
}

TEST(SimulateUcr, RollingMeanAlignment) {
    // With R_tilde = 1 the rolling mean is the origin observation, h steps before the target.
    const DgpSpec spec = make_spec(Family::ucr, 3, 25, 1, 50);
    epa::Engine rng = epa::make_stream(4, {});
    const ForecastPaths p = simulate_ucr(spec, rng);
    for (std::size_t i = 3; i < 50; ++i) EXPECT_NEAR(p.f2[i], p.target[i - 3], 1e-12);
}

TEST(SimulateCr, RollingMeanAlignmentAndStationarity) {
    const DgpSpec spec = make_spec(Family::cr, 1, 25, 1, 1000000);
    epa::Engine rng = epa::make_stream(5, {});
    const ForecastPaths p = simulate_cr(spec, rng);
    for (std::size_t i = 1; i < 100; ++i) EXPECT_NEAR(p.f2[i], p.target[i - 1], 1e-12);
    const std::size_t half = p.target.size() / 2;
    auto variance = [](auto first, auto last) {
        const double n = static_cast<double>(last - first);
        const double m = std::accumulate(first, last, 0.0) / n;
        double ss = 0.0;
        for (auto it = first; it != last; ++it) ss += (*it - m) * (*it - m);
        return ss / n;
    };
    const double ratio = variance(p.target.begin(), p.target.begin() + half) / variance(p.target.begin() + half, p.target.end());
    EXPECT_GE(ratio, 0.9);
    EXPECT_LE(ratio, 1.1);
}

TEST(Simulate, DeterministicForFixedStream) {
    for (Family f : {Family::ucr, Family::cr}) {
        const DgpSpec spec = make_spec(f, 3, 25, 75, 40);
        epa::Engine a = epa::make_stream(9, {2});
        epa::Engine b = epa::make_stream(9, {2});
        const auto pa = simulate(spec, a);
        const auto pb = simulate(spec, b);
        EXPECT_EQ(pa.target, pb.target);
        EXPECT_EQ(pa.f2, pb.f2);
    }
}

TEST(Simulate, SpecValidation) {
    DgpSpec bad = make_spec(Family::cr, 1, 25, 25, 40);
    bad.mu = 0.3;
    epa::Engine rng = epa::make_stream(1, {});
    EXPECT_THROW(static_cast<void>(simulate(bad, rng)), std::invalid_argument);
    EXPECT_THROW(static_cast<void>(make_spec(Family::ucr, 0, 25, 25, 40)), std::invalid_argument);
    EXPECT_THROW(static_cast<void>(simulate_ucr(make_spec(Family::cr, 1, 25, 25, 40), rng)), std::invalid_argument);
}

class NullExactness : public ::testing::TestWithParam<std::pair<Family, int>> {};

TEST_P(NullExactness, MeanLossDifferentialIsZero) {
    const auto [family, h] = GetParam();
    const DgpSpec spec = make_spec(family, h, 25, 25, 1000000);
    epa::Engine rng = epa::make_stream(77, {static_cast<std::uint64_t>(h)});
    const auto d = loss_differential(simulate(spec, rng));
    const auto [m, se] = mean_and_se(d);
    EXPECT_LT(std::fabs(m), 3.0 * se) << "mean " << m << " se " << se;
}

INSTANTIATE_TEST_SUITE_P(Designs, NullExactness,
                         ::testing::Values(std::pair{Family::ucr, 1}, std::pair{Family::ucr, 3},
                                           std::pair{Family::ucr, 12}, std::pair{Family::cr, 1},
                                           std::pair{Family::cr, 3}, std::pair{Family::cr, 12}),
                         [](const auto& info) {
                             return to_string(info.param.first) + "_h" + std::to_string(info.param.second);
                         });

TEST(SizeCorrection, OrderStatisticConvention) {
    std::vector<double> x(100);
    std::iota(x.begin(), x.end(), 1.0);
    std::shuffle(x.begin(), x.end(), std::mt19937_64(1));
    EXPECT_EQ(epa::size_corrected_critical_value(x), 95.0);
    EXPECT_EQ(epa::size_corrected_critical_value(std::vector<double>(7, 2.5)), 2.5);
    EXPECT_EQ(epa::size_corrected_critical_value(std::vector<double>{3.0}), 3.0);
    EXPECT_THROW(static_cast<void>(epa::size_corrected_critical_value(std::vector<double>{})), std::invalid_argument);

    std::mt19937_64 rng(2);
    auto z = oracle::gaussian(1000000, rng);
    for (double& v : z) v = std::fabs(v);
    EXPECT_NEAR(epa::size_corrected_critical_value(z), 1.96, 0.01);
}

TEST(Methods, LabelsRoundTrip) {
    for (McMethod m : all_methods()) EXPECT_EQ(parse_mc_method(label(m)), m);
    EXPECT_EQ(parse_mc_method("dm_im5"), McMethod::dm_im5);
    EXPECT_EQ(all_methods().size(), 9u);
    EXPECT_THROW(static_cast<void>(parse_mc_method("DM-XYZ")), std::invalid_argument);
    EXPECT_EQ(parse_family("cr"), Family::cr);
}

class ExperimentTest : public ::testing::Test {
protected:
    void SetUp() override {
        grid_ = factorial_grid({Family::ucr, Family::cr}, {1, 3}, {25, 75}, {25, 75}, {25, 75});
    }
    std::vector<DgpSpec> grid_;
};

TEST_F(ExperimentTest, ArchivesRatesAndDeterminism) {
    const auto a = run_experiment(grid_, all_methods(), 200, 0.05, 17, 1);
    const auto b = run_experiment(grid_, all_methods(), 200, 0.05, 17, 4);
    ASSERT_EQ(a.cells.size(), 32u);
    for (const auto& [key, cell] : a.cells) {
        for (std::size_t s = 0; s < a.methods.size(); ++s) {
            const auto& t = cell.tallies[s];
            EXPECT_EQ(t.abs_stats.size(), 200u);
            EXPECT_LE(t.rejections + t.degenerate, 200u);
            EXPECT_EQ(t.abs_stats, b.cells.at(key).tallies[s].abs_stats);
            EXPECT_EQ(t.rejections, b.cells.at(key).tallies[s].rejections);
            const double rate = a.rejection_rate(key, a.methods[s]);
            EXPECT_GE(rate, 0.0);
            EXPECT_LE(rate, 1.0);
        }
        EXPECT_EQ(a.tally(key, McMethod::dm_nw_l).abs_stats, a.tally(key, McMethod::dm_fb).abs_stats);
    }
}

TEST_F(ExperimentTest, GridOrderDoesNotMatter) {
    const std::vector<McMethod> methods{McMethod::dm_r, McMethod::dm_ewc};
    auto reversed = grid_;
    std::reverse(reversed.begin(), reversed.end());
    const auto a = run_experiment(grid_, methods, 100, 0.05, 3, 1);
    const auto b = run_experiment(reversed, methods, 100, 0.05, 3, 1);
    for (const auto& [key, cell] : a.cells) {
        EXPECT_EQ(cell.tallies[1].abs_stats, b.cells.at(key).tallies[1].abs_stats);
    }
}

TEST_F(ExperimentTest, StatisticsMatchLibraryTests) {
    const std::uint64_t seed = 5;
    const auto result = run_experiment(grid_, all_methods(), 100, 0.05, seed, 1);
    for (const DgpSpec& spec : grid_) {
        const CellKey key = key_of(spec);
        for (std::size_t rep = 0; rep < 100; rep += 33) {
            epa::Engine rng = epa::make_stream(seed, {static_cast<std::uint64_t>(spec.family),
                                                      static_cast<std::uint64_t>(spec.h),
                                                      static_cast<std::uint64_t>(spec.R),
                                                      static_cast<std::uint64_t>(spec.R_tilde),
                                                      static_cast<std::uint64_t>(spec.P), rep});
            const epa::LossSeries d(loss_differential(simulate(spec, rng)));
            auto check = [&](McMethod m, auto&& run) {
                const auto& t = result.tally(key, m);
                try {
                    const epa::TestOutcome o = run();
                    EXPECT_NEAR(t.abs_stats[rep], std::fabs(o.stat), 1e-10 * std::max(1.0, std::fabs(o.stat)))
                        << label(m);
                } catch (const epa::DegenerateVarianceError&) {
                    EXPECT_EQ(t.abs_stats[rep], 0.0);
                }
            };
            check(McMethod::dm_r, [&] { return epa::dm_test_r(d, spec.h); });
            check(McMethod::dm_m, [&] { return epa::dm_test_m(d, spec.h); });
            check(McMethod::dm_nw, [&] { return epa::dm_test_bt(d); });
            check(McMethod::dm_fb, [&] { return epa::dm_test_bt_fb(d); });
            check(McMethod::dm_ewc, [&] { return epa::dm_test_ewc_fb(d); });
            check(McMethod::dm_im10, [&] { return epa::dm_test_im(d, 10); });
        }
    }
}

TEST_F(ExperimentTest, SizeCorrectedPower) {
    const auto result = run_experiment(grid_, all_methods(), 400, 0.05, 23, 1);
    for (const auto& [key, cell] : result.cells) {
        for (McMethod m : all_methods()) {
            const double p = size_corrected_power(result, key, m);
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
            if (key.diagonal()) {
                EXPECT_LE(p, 0.05);
                EXPECT_GE(p, 0.05 - 1.0 / 400 - 1e-12);
            }
        }
        EXPECT_EQ(size_corrected_power(result, key, McMethod::dm_nw_l), size_corrected_power(result, key, McMethod::dm_fb));
    }
}

TEST(Experiment, Validation) {
    const auto grid = factorial_grid({Family::ucr}, {1}, {25}, {75}, {25});
    EXPECT_THROW(static_cast<void>(run_experiment(grid, all_methods(), 99, 0.05, 1)), std::invalid_argument);
    EXPECT_THROW(static_cast<void>(run_experiment(grid, all_methods(), 100, 0.10, 1)), epa::UnsupportedLevelError);
    EXPECT_NO_THROW(static_cast<void>(run_experiment(grid, {McMethod::dm_r}, 100, 0.10, 1)));
    const auto result = run_experiment(grid, {McMethod::dm_r}, 100, 0.05, 1);
    const CellKey key = key_of(grid.front());
    EXPECT_THROW(static_cast<void>(size_corrected_power(result, key, McMethod::dm_r)), std::out_of_range);
    EXPECT_THROW(static_cast<void>(result.tally(key, McMethod::dm_fb)), std::out_of_range);
}
