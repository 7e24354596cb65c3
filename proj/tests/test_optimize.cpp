#include <gtest/gtest.h>

#include <cmath>

#include "phidiv/optimize.hpp"

using namespace phidiv;

namespace {

double rosenbrock(std::span<const double> x) {
  const double a = 1.0 - x[0];
  const double b = x[1] - x[0] * x[0];
  return a * a + 100.0 * b * b;
}

const std::vector<Interval> kWideBox{{-5.0, 5.0}, {-5.0, 5.0}};

}  // namespace

TEST(NelderMead, Rosenbrock) {
  const NelderMeadResult r = nelder_mead_box(rosenbrock, {-1.2, 1.0}, kWideBox);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
  EXPECT_LT(r.value, 1e-8);
}

TEST(NelderMead, QuadraticMinimum) {
  const auto f = [](std::span<const double> x) {
    return (x[0] - 0.3) * (x[0] - 0.3) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0) + 1.5;
  };
  const NelderMeadResult r = nelder_mead_box(f, {1.0, 1.0}, kWideBox);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 0.3, 1e-5);
  EXPECT_NEAR(r.x[1], -2.0, 1e-5);
  EXPECT_NEAR(r.value, 1.5, 1e-10);
}

TEST(NelderMead, MinimumOutsideBoxLandsOnBoundary) {
  const auto f = [](std::span<const double> x) { return (x[0] - 3.0) * (x[0] - 3.0) + x[1] * x[1]; };
  const std::vector<Interval> box{{-1.0, 1.0}, {-1.0, 1.0}};
  NelderMeadOptions opt;
  opt.record_trace = true;
  const NelderMeadResult r = nelder_mead_box(f, {0.0, 0.5}, box, opt);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 0.0, 1e-4);
  EXPECT_LE(r.x[0], 1.0);
}

TEST(NelderMead, NonFiniteValuesAreAvoided) {
  // NaN to the left of 0.5: the search must stay on the finite side.
  const auto f = [](std::span<const double> x) {
    return x[0] < 0.5 ? std::nan("") : (x[0] - 0.7) * (x[0] - 0.7);
  };
  const std::vector<Interval> box{{-2.0, 2.0}};
  const NelderMeadResult r = nelder_mead_box(f, {1.5}, box);
  EXPECT_NEAR(r.x[0], 0.7, 1e-5);
  EXPECT_TRUE(std::isfinite(r.value));
}

TEST(NelderMead, BestTraceNeverIncreases) {
  NelderMeadOptions opt;
  opt.record_trace = true;
  const NelderMeadResult r = nelder_mead_box(rosenbrock, {-1.2, 1.0}, kWideBox, opt);
  ASSERT_FALSE(r.best_trace.empty());
  for (std::size_t i = 1; i < r.best_trace.size(); ++i) {
    EXPECT_LE(r.best_trace[i], r.best_trace[i - 1]);
  }
}

TEST(NelderMead, Deterministic) {
  const NelderMeadResult a = nelder_mead_box(rosenbrock, {-1.2, 1.0}, kWideBox);
  const NelderMeadResult b = nelder_mead_box(rosenbrock, {-1.2, 1.0}, kWideBox);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(NelderMead, IterationCapReportsNonConvergence) {
  NelderMeadOptions opt;
  opt.max_iterations = 5;
  const NelderMeadResult r = nelder_mead_box(rosenbrock, {-1.2, 1.0}, kWideBox, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 5u);
}
