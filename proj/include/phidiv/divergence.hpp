#pragma once

#include <cstddef>
#include <string>

#include "phidiv/estimate.hpp"
#include "phidiv/limitlaw.hpp"
#include "phidiv/models.hpp"
#include "phidiv/phi_family.hpp"
#include "phidiv/simulate.hpp"

namespace phidiv {

struct StatisticValue {
  double statistic = 0.0;  // >= 0
  double log_ratio = 0.0;  // after the swap, always <= 0
  bool swapped = false;
};

// phi applied to the approximate likelihood ratio f_n(theta_hat) / f_n(theta0)
// built from the DCFZ log-likelihood. A ratio above one is inverted first,
// which on the log scale is r <- -|r|.
StatisticValue test_statistic(const DiffusionModel& model, const PhiFamily& family,
                              const ObservedPath& path, const ParamVector& theta_hat,
                              const ParamVector& theta0);

// Same, from an already computed log-ratio.
StatisticValue statistic_from_log_ratio(const PhiFamily& family, double log_ratio);

struct TestReport {
  double statistic = 0.0;
  double log_ratio = 0.0;
  bool swapped = false;
  double threshold = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double level = 0.05;
  std::string family_name;
  std::size_t df = 0;
  FitResult fit;
};

struct TestOptions {
  QuantileMethod quantile = QuantileMethod::analytic();
  FitOptions fit;
};

// H0: theta = theta0. Fits theta_hat by QMLE started at theta0, evaluates the
// statistic and compares it with the limit-law threshold. Fit failures
// propagate as OptimizationFailure.
TestReport run_test(const DiffusionModel& model, const PhiFamily& family, const ObservedPath& path,
                    const ParamVector& theta0, double level, const TestOptions& options = {});

}  // namespace phidiv
