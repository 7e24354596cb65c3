#include "phidiv/divergence.hpp"

#include <cmath>
#include <sstream>

#include "phidiv/errors.hpp"
#include "phidiv/likelihood.hpp"

namespace phidiv {

StatisticValue statistic_from_log_ratio(const PhiFamily& family, double log_ratio) {
  if (std::isnan(log_ratio)) throw DomainError("log-likelihood ratio is NaN");
  StatisticValue out;
  out.swapped = log_ratio > 0.0;
  out.log_ratio = out.swapped ? -log_ratio : log_ratio;
  // Built-in families are nonnegative on r <= 0; the absolute value only
  // matters for custom phi.
  out.statistic = std::abs(family(out.log_ratio));
  return out;
}

StatisticValue test_statistic(const DiffusionModel& model, const PhiFamily& family,
                              const ObservedPath& path, const ParamVector& theta_hat,
                              const ParamVector& theta0) {
  const double r = dcfz_loglik(model, theta_hat, path) - dcfz_loglik(model, theta0, path);
  return statistic_from_log_ratio(family, r);
}

TestReport run_test(const DiffusionModel& model, const PhiFamily& family, const ObservedPath& path,
                    const ParamVector& theta0, double level, const TestOptions& options) {
  if (!(level > 0.0 && level < 1.0)) {
    std::ostringstream msg;
    msg << "level must lie in (0, 1), got " << level;
    throw InvalidParameterError(msg.str());
  }
  TestReport report;
  report.fit = qmle_fit(model, path, theta0, options.fit);
  const StatisticValue stat = test_statistic(model, family, path, report.fit.theta_hat, theta0);
  const LimitLaw law = limit_law(family, model.p(), model.q());

  report.statistic = stat.statistic;
  report.log_ratio = stat.log_ratio;
  report.swapped = stat.swapped;
  report.level = level;
  report.family_name = family.name;
  report.df = law.df;
  if (options.quantile.kind == QuantileMethod::Kind::mc) {
    const LimitLawSample sample(law, options.quantile.draws, options.quantile.seed);
    report.threshold = sample.threshold(level);
    report.p_value = sample.p_value(report.statistic);
  } else {
    report.threshold = threshold(law, level, options.quantile);
    report.p_value = p_value(law, report.statistic, options.quantile);
  }
  report.reject = report.statistic > report.threshold;
  return report;
}

}  // namespace phidiv
