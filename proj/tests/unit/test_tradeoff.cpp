#include "epa/dm_tests.hpp"
#include "epa/errors.hpp"
#include "epa/lrv.hpp"
#include "epa/tradeoff.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using epa::FittedArModel;
using epa::LossSeries;

namespace {

FittedArModel ar1_model(double phi, double sigma2) {
    FittedArModel m;
    m.order = 1;
    m.coefficients = {phi};
    m.innovation_variance = sigma2;
    m.implied_lrv = sigma2 / ((1 - phi) * (1 - phi));
    return m;
}

FittedArModel white_noise() {
    FittedArModel m;
    m.innovation_variance = 1.0;
    m.implied_lrv = 1.0;
    return m;
}

}  // namespace

TEST(Stationarity, CompanionSpectralRadius) {
    EXPECT_TRUE(epa::is_stationary({}));
    EXPECT_TRUE(epa::is_stationary({0.9}));
    EXPECT_FALSE(epa::is_stationary({1.0}));
    EXPECT_FALSE(epa::is_stationary({-1.2}));
    EXPECT_TRUE(epa::is_stationary({0.5, 0.3}));
    EXPECT_FALSE(epa::is_stationary({0.5, 0.6}));
    EXPECT_TRUE(epa::is_stationary({1.2, -0.5}));
}

TEST(FitAr, RecoversAr1) {
    std::mt19937_64 rng(41);
    const LossSeries d(oracle::ar1(4000, 0.6, 2.0, rng));
    const FittedArModel m = epa::fit_ar(d, 10);
    ASSERT_GE(m.order, 1);
    EXPECT_NEAR(m.coefficients[0], 0.6, 0.05);
    EXPECT_NEAR(m.innovation_variance, 1.0, 0.06);
    EXPECT_NEAR(m.sample_mean, 2.0, 0.15);
    EXPECT_NEAR(m.implied_lrv, 6.25, 1.2);
    EXPECT_TRUE(epa::is_stationary(m.coefficients));
    double phi_sum = 0.0;
    for (double c : m.coefficients) phi_sum += c;
    EXPECT_NEAR(m.implied_lrv, m.innovation_variance / ((1 - phi_sum) * (1 - phi_sum)), 1e-12);
}

TEST(FitAr, WhiteNoiseSelectsLowOrder) {
    std::mt19937_64 rng(42);
    const FittedArModel m = epa::fit_ar(LossSeries(oracle::gaussian(3000, rng)), 8);
    EXPECT_LE(m.order, 2);
    EXPECT_NEAR(m.implied_lrv, 1.0, 0.15);
}

TEST(FitAr, ConstantSeriesAndSampleSizeGuard) {
    const FittedArModel m = epa::fit_ar(LossSeries(std::vector<double>(20, 1.5)), 4);
    EXPECT_EQ(m.order, 0);
    EXPECT_EQ(m.innovation_variance, 0.0);
    EXPECT_DOUBLE_EQ(m.sample_mean, 1.5);
    EXPECT_THROW(static_cast<void>(epa::fit_ar(LossSeries(std::vector<double>(9, 1.0)), 4)), std::invalid_argument);
}

TEST(Simulate, DeterministicAndStationaryMoments) {
    const FittedArModel m = ar1_model(0.5, 2.0);
    EXPECT_EQ(epa::simulate_from_model(m, 50, 0.0, 7), epa::simulate_from_model(m, 50, 0.0, 7));
    EXPECT_NE(epa::simulate_from_model(m, 50, 0.0, 7), epa::simulate_from_model(m, 50, 0.0, 8));

    const auto x = epa::simulate_from_model(m, 200000, 0.0, 9);
    const auto ac = epa::autocovariance(LossSeries(x), 1);
    EXPECT_NEAR(ac.gamma[0], 2.0 / (1 - 0.25), 0.05);
    EXPECT_NEAR(ac.gamma[1] / ac.gamma[0], 0.5, 0.01);
    EXPECT_NEAR(ac.mean, 0.0, 0.02);

    const auto shifted = epa::simulate_from_model(m, 50, 0.75, 7);
    const auto base = epa::simulate_from_model(m, 50, 0.0, 7);
    for (std::size_t t = 0; t < 50; ++t) EXPECT_DOUBLE_EQ(shifted[t], base[t] + 0.75);
}

TEST(OraclePower, NullAndMonotone) {
    EXPECT_NEAR(epa::oracle_power(2.0, 40, 0.0), 0.05, 1e-12);
    double last = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double p = epa::oracle_power(2.0, 40, 0.1 * k);
        EXPECT_GE(p, last);
        last = p;
    }
    const double reach = (1.959963984540054 + 2.326347874040841) * std::sqrt(2.0) / std::sqrt(40.0);
    EXPECT_GE(epa::oracle_power(2.0, 40, reach), 0.99);
    EXPECT_THROW(static_cast<void>(epa::oracle_power(0.0, 40, 0.1)), std::invalid_argument);
}

TEST(SizeDistortion, WhiteNoiseFixedBIsNearNominal) {
    const double sd = epa::size_distortion(white_noise(), 100, 13, 4000, 5, 1);
    EXPECT_NEAR(sd, 0.0, 0.015);
    EXPECT_GE(sd, -0.05);
}

TEST(SizeDistortion, PersistentModelOverRejectsAtSmallM) {
    const FittedArModel m = ar1_model(0.8, 1.0);
    const double small = epa::size_distortion(m, 40, 1, 2000, 5, 1);
    const double large = epa::size_distortion(m, 40, 20, 2000, 5, 1);
    EXPECT_GT(small, 0.2);
    EXPECT_LT(large, small);
}

TEST(MaxPowerLoss, BoundedAndGrowsWithBandwidth) {
    const FittedArModel m = white_noise();
    const double small = epa::max_power_loss(m, 40, 2, 2000, 20, 6, 1);
    const double large = epa::max_power_loss(m, 40, 39, 2000, 20, 6, 1);
    EXPECT_GE(small, 0.0);
    EXPECT_LE(large, 1.0);
    EXPECT_GT(large, small);
}

TEST(TradeoffGrid, DefaultContainsPackageBandwidth) {
    const auto grid = epa::default_bandwidth_grid(40);
    EXPECT_EQ(grid.front(), 1);
    EXPECT_EQ(grid.back(), 18);
    EXPECT_NE(std::find(grid.begin(), grid.end(), 9), grid.end());
    EXPECT_EQ(epa::default_bandwidth_grid(10).back(), 9);
}

class TradeoffCurveTest : public ::testing::Test {
protected:
    void SetUp() override {
        std::mt19937_64 rng(43);
        series_ = oracle::ar1(40, 0.3, 0.45, rng);
        config_.n_sim = 600;
        config_.workers = 1;
    }

    std::vector<double> series_;
    epa::TradeoffConfig config_;
};

TEST_F(TradeoffCurveTest, RejectedFlagsMatchFixedBTest) {
    const LossSeries d(series_);
    const auto curve = epa::build_tradeoff_curve(d, config_);
    EXPECT_EQ(curve.default_M, 9);
    ASSERT_EQ(curve.points.size(), 18u);
    for (const auto& p : curve.points) {
        EXPECT_EQ(p.rejected, epa::dm_test_bt_fb(d, p.M).rej) << "M = " << p.M;
        EXPECT_GE(p.size_distortion, -0.05);
        EXPECT_LE(p.size_distortion, 0.95);
        EXPECT_GE(p.max_power_loss, 0.0);
        EXPECT_LE(p.max_power_loss, 1.0);
    }
}

TEST_F(TradeoffCurveTest, DeterministicAcrossWorkerCounts) {
    const LossSeries d(series_);
    const auto a = epa::build_tradeoff_curve(d, config_);
    config_.workers = 3;
    const auto b = epa::build_tradeoff_curve(d, config_);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].size_distortion, b.points[i].size_distortion);
        EXPECT_EQ(a.points[i].max_power_loss, b.points[i].max_power_loss);
    }
}

TEST_F(TradeoffCurveTest, CustomGridAndValidation) {
    const LossSeries d(series_);
    config_.bandwidth_grid = {2, 5, 9};
    const auto curve = epa::build_tradeoff_curve(d, config_);
    ASSERT_EQ(curve.points.size(), 3u);
    EXPECT_EQ(curve.points[2].M, 9);

    config_.bandwidth_grid = {5, 2};
    EXPECT_THROW(static_cast<void>(epa::build_tradeoff_curve(d, config_)), std::invalid_argument);
    config_.bandwidth_grid = {40};
    EXPECT_THROW(static_cast<void>(epa::build_tradeoff_curve(d, config_)), std::out_of_range);
    config_.bandwidth_grid = {};
    config_.n_sim = 50;
    EXPECT_THROW(static_cast<void>(epa::build_tradeoff_curve(d, config_)), std::invalid_argument);
}

TEST(TradeoffCurve, RejectsShortOrConstantSeries) {
    epa::TradeoffConfig config;
    config.n_sim = 200;
    EXPECT_THROW(static_cast<void>(epa::build_tradeoff_curve(LossSeries(std::vector<double>(9, 0.5)), config)),
                 std::invalid_argument);
    std::vector<double> flat(20, 0.5);
    EXPECT_THROW(static_cast<void>(epa::build_tradeoff_curve(LossSeries(flat), config)), epa::DegenerateVarianceError);
}
