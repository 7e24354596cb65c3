#include <gtest/gtest.h>

#include <cmath>

#include "phidiv/divergence.hpp"
#include "phidiv/errors.hpp"
#include "phidiv/likelihood.hpp"
#include "test_support.hpp"

using namespace phidiv;
using namespace phidiv::testing;

TEST(Statistic, ZeroWhenEstimateEqualsNull) {
  const DiffusionModel m = vas0_model();
  const ObservedPath p = simulate(m, vas0(), kVasMean, 100, 0.01, {1, 0});
  for (const PhiFamily& f : {make_log_family(), make_alpha_family(-0.5), make_power_family(-1.5)}) {
    const StatisticValue s = test_statistic(m, f, p, vas0(), vas0());
    EXPECT_EQ(s.statistic, 0.0);
    EXPECT_EQ(s.log_ratio, 0.0);
    EXPECT_FALSE(s.swapped);
  }
}

TEST(Statistic, LogFamilyIsAbsoluteLoglikDifference) {
  const DiffusionModel m = vas0_model();
  const ObservedPath p = simulate(m, vas0(), kVasMean, 200, 0.01, {2, 0});
  const ParamVector other = mean_reverting_theta(1.0, 0.095, 0.0023);
  const double diff = dcfz_loglik(m, other, p) - dcfz_loglik(m, vas0(), p);
  const StatisticValue s = test_statistic(m, make_log_family(), p, other, vas0());
  EXPECT_DOUBLE_EQ(s.statistic, std::abs(diff));
  EXPECT_DOUBLE_EQ(s.log_ratio, -std::abs(diff));
  EXPECT_EQ(s.swapped, diff > 0);
}

TEST(Statistic, SwapRule) {
  const StatisticValue up = statistic_from_log_ratio(make_log_family(), 2.5);
  EXPECT_TRUE(up.swapped);
  EXPECT_EQ(up.log_ratio, -2.5);
  EXPECT_EQ(up.statistic, 2.5);
  const StatisticValue down = statistic_from_log_ratio(make_log_family(), -2.5);
  EXPECT_FALSE(down.swapped);
  EXPECT_EQ(down.statistic, 2.5);
}

TEST(Statistic, AlphaFamilyValue) {
  const StatisticValue s = statistic_from_log_ratio(make_alpha_family(-0.5), -1.0);
  EXPECT_NEAR(s.statistic, 4.0 * (1.0 - std::exp(-0.25)) / 0.75, 1e-14);
  EXPECT_NEAR(s.statistic, 1.179729, 5e-7);
}

TEST(Statistic, CustomFamilyStaysNonnegative) {
  const PhiFamily lin = make_custom_family([](double x) { return x - 1; }, "lin");
  EXPECT_GE(statistic_from_log_ratio(lin, -1.0).statistic, 0.0);
  EXPECT_GE(statistic_from_log_ratio(lin, 1.0).statistic, 0.0);
}

TEST(RunTest, ReportIsConsistent) {
  const DiffusionModel m = vas0_model();
  const ObservedPath p = simulate(m, vas1(), kVasMean, 200, 0.01, {3, 0});
  const TestReport r = run_test(m, make_log_family(), p, vas0(), 0.05);
  EXPECT_EQ(r.df, 3u);
  EXPECT_EQ(r.family_name, "log");
  EXPECT_EQ(r.level, 0.05);
  EXPECT_NEAR(r.threshold, 3.907364, 5e-7);
  EXPECT_EQ(r.reject, r.statistic > r.threshold);
  EXPECT_GE(r.p_value, 0.0);
  EXPECT_LE(r.p_value, 1.0);
  EXPECT_TRUE(r.fit.converged);
  const StatisticValue s = test_statistic(m, make_log_family(), p, r.fit.theta_hat, vas0());
  EXPECT_EQ(s.statistic, r.statistic);
}

TEST(RunTest, RejectsVas1Alternative) {
  const DiffusionModel m = vas0_model();
  const ObservedPath p = simulate_stationary(m, vas1(), kVasMean, 500, 0.001, 1000, {4, 0});
  const TestReport r = run_test(m, make_log_family(), p, vas0(), 0.05);
  EXPECT_TRUE(r.reject);
  EXPECT_LT(r.p_value, 0.05);
}

TEST(RunTest, LevelUnderNull) {
  const DiffusionModel m = vas0_model();
  const double level = 0.05;
  int rejections = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    const ObservedPath p = simulate_stationary(m, vas0(), kVasMean, 10000, 0.01, 10000,
                                               {55, static_cast<std::uint64_t>(s)});
    TestOptions opt;
    opt.fit.restarts = 1;
    rejections += run_test(m, make_log_family(), p, vas0(), level, opt).reject ? 1 : 0;
  }
  EXPECT_LE(static_cast<double>(rejections) / seeds, 3 * level);
}

TEST(RunTest, ExtremeLevelRejectsAnyPositiveStatistic) {
  const DiffusionModel m = cir0_model();
  const ObservedPath p = simulate(m, cir0(), kCirMean, 100, 0.01, {5, 0});
  const TestReport r = run_test(m, make_log_family(), p, cir0(), 1.0 - 1e-6);
  EXPECT_LT(r.threshold, 1e-3);
  EXPECT_GT(r.statistic, 0.0);
  EXPECT_TRUE(r.reject);
}

TEST(RunTest, MonteCarloQuantiles) {
  const DiffusionModel m = vas0_model();
  const ObservedPath p = simulate(m, vas0(), kVasMean, 200, 0.01, {6, 0});
  TestOptions opt;
  opt.quantile = QuantileMethod::mc(100000, 3);
  const TestReport r = run_test(m, make_alpha_family(-0.5), p, vas0(), 0.05, opt);
  const TestReport a = run_test(m, make_alpha_family(-0.5), p, vas0(), 0.05);
  EXPECT_NEAR(r.threshold, a.threshold, 0.02 * a.threshold);
  EXPECT_EQ(r.statistic, a.statistic);
}

TEST(RunTest, BadLevelRejected) {
  const DiffusionModel m = vas0_model();
  const ObservedPath p = simulate(m, vas0(), kVasMean, 20, 0.01, {6, 0});
  EXPECT_THROW(run_test(m, make_log_family(), p, vas0(), 0.0), InvalidParameterError);
  EXPECT_THROW(run_test(m, make_log_family(), p, vas0(), 1.0), InvalidParameterError);
}
