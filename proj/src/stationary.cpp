#include "phidiv/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "phidiv/errors.hpp"
#include "phidiv/likelihood.hpp"
#include "phidiv/simulate.hpp"

namespace phidiv {
namespace {

constexpr double kLogTailCut = -40.0;
constexpr int kMaxExpansions = 200;

}  // namespace

QuadratureSettings stationary_quadrature() {
  QuadratureSettings s;
  s.abs_tol = 1e-14;
  s.rel_tol = 1e-11;
  s.max_subdivisions = 20000;
  return s;
}

StationaryDensity::StationaryDensity(const DiffusionModel& model, ParamVector theta,
                                     std::optional<double> anchor)
    : model_(model), theta_(std::move(theta)) {
  model.check_shape(theta_);
  anchor_ = anchor ? *anchor : model.reference_state(theta_);
  const double lb = model.state_lower_bound();
  if (!(anchor_ > lb) || !std::isfinite(anchor_)) {
    throw DomainError("stationary anchor must lie inside the state space");
  }
  const double s = model.diffusion(theta_, anchor_);
  if (!(s > 0.0)) throw DomainError("diffusion coefficient vanishes at the anchor");
  log_sigma_anchor_ = std::log(s);

  auto below_cut = [&](double x) {
    const double v = log_speed(x);
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      std::ostringstream msg;
      msg << "speed density is not finite at x = " << x;
      throw NonErgodicError(msg.str());
    }
    return v < kLogTailCut;
  };

  const double h0 = std::max({0.1 * s, 1e-3 * std::abs(anchor_), 1e-8});

  double h = h0;
  int i = 0;
  for (; i < kMaxExpansions && !below_cut(anchor_ + h); ++i) h *= 1.6;
  if (i == kMaxExpansions) throw NonErgodicError("speed density does not decay to the right");
  support_.upper = anchor_ + h;

  h = h0;
  const double floor = lb + kStateFloor;
  for (i = 0; i < kMaxExpansions; ++i) {
    const double x = anchor_ - h;
    if (std::isfinite(lb) && x <= floor) {
      support_.lower = floor;
      break;
    }
    if (below_cut(x)) {
      support_.lower = x;
      break;
    }
    h *= 1.6;
  }
  if (i == kMaxExpansions) throw NonErgodicError("speed density does not decay to the left");

  const double mass = integrate([&](double x) { return std::exp(log_speed(x)); }, support_.lower,
                                support_.upper, stationary_quadrature());
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NonErgodicError("speed measure is not normalisable");
  }
  log_norm_ = std::log(mass);
}

double StationaryDensity::log_speed(double x) const {
  if (x <= model_.state_lower_bound()) return -std::numeric_limits<double>::infinity();
  const double s = model_.diffusion(theta_, x);
  if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
  return -std::log(s) + log_sigma_anchor_ +
         2.0 * H_fun(model_, theta_, anchor_, x, stationary_quadrature());
}

double StationaryDensity::log_pdf(double x) const { return log_speed(x) - log_norm_; }

double StationaryDensity::pdf(double x) const { return std::exp(log_pdf(x)); }

double StationaryDensity::expect(const std::function<double(double)>& g) const {
  // Absolute tolerance scaled by E|g| so expectations that cancel to zero
  // still converge.
  QuadratureSettings rough;
  rough.rel_tol = 1e-6;
  rough.max_subdivisions = 20000;
  const double scale = integrate([&](double x) { return std::abs(g(x)) * pdf(x); },
                                 support_.lower, support_.upper, rough);
  QuadratureSettings s = stationary_quadrature();
  s.abs_tol = std::max(s.abs_tol, s.rel_tol * scale);
  return integrate([&](double x) { return g(x) * pdf(x); }, support_.lower, support_.upper, s);
}

double invariant_density(const DiffusionModel& model, const ParamVector& theta, double x) {
  return StationaryDensity(model, theta).pdf(x);
}

double invariant_divergence(const DiffusionModel& model, const PhiFamily& phi,
                            const ParamVector& theta, const ParamVector& theta0) {
  const StationaryDensity alt(model, theta);
  const StationaryDensity null(model, theta0);
  const double lo = std::min(alt.support().lower, null.support().lower);
  const double hi = std::max(alt.support().upper, null.support().upper);
  return integrate(
      [&](double x) {
        const double log_null = null.log_pdf(x);
        if (log_null == -std::numeric_limits<double>::infinity()) return 0.0;
        const double r = alt.log_pdf(x) - log_null;
        return std::exp(log_null) * phi(r);
      },
      lo, hi, stationary_quadrature());
}

}  // namespace phidiv
