#include "phidiv/models.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "phidiv/errors.hpp"
#include "phidiv/simulate.hpp"

namespace phidiv {

std::vector<double> ParamVector::flat() const {
  std::vector<double> out(alpha);
  out.insert(out.end(), beta.begin(), beta.end());
  return out;
}

ParamVector ParamVector::from_flat(std::span<const double> values, std::size_t p) {
  if (p > values.size()) {
    throw InvalidParameterError("drift block larger than parameter vector");
  }
  ParamVector out;
  out.alpha.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(p));
  out.beta.assign(values.begin() + static_cast<std::ptrdiff_t>(p), values.end());
  return out;
}

bool ParamVector::all_finite() const {
  for (double v : alpha) {
    if (!std::isfinite(v)) return false;
  }
  for (double v : beta) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double Interval::clamp(double v) const {
  if (v < lower) return lower;
  if (v > upper) return upper;
  return v;
}

DiffusionModel::DiffusionModel(ModelDefinition def) : def_(std::move(def)) {
  if (def_.p + def_.q < 1) {
    throw InvalidParameterError("model needs at least one parameter");
  }
  if (!def_.drift || !def_.diffusion || !def_.diffusion_dx) {
    throw InvalidParameterError("model '" + def_.name + "' is missing an evaluator");
  }
  if (def_.param_box.empty()) {
    def_.param_box.assign(def_.p + def_.q, Interval{});
  }
  if (def_.param_box.size() != def_.p + def_.q) {
    throw InvalidParameterError("parameter box has wrong length");
  }
  for (const Interval& iv : def_.param_box) {
    if (!(iv.lower <= iv.upper)) {
      throw InvalidParameterError("parameter box has an empty interval");
    }
  }
}

bool DiffusionModel::in_box(const ParamVector& theta) const {
  if (theta.p() != p() || theta.q() != q()) return false;
  const std::vector<double> flat = theta.flat();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (!def_.param_box[i].contains(flat[i])) return false;
  }
  return true;
}

double DiffusionModel::reference_state(const ParamVector& theta) const {
  if (def_.reference_state) return def_.reference_state(theta);
  if (std::isfinite(def_.state_lower_bound)) return def_.state_lower_bound + 1.0;
  return 0.0;
}

void DiffusionModel::check_shape(const ParamVector& theta) const {
  if (theta.p() != p() || theta.q() != q()) {
    std::ostringstream msg;
    msg << "model '" << name() << "' expects " << p() << " drift and " << q()
        << " diffusion parameters, got " << theta.p() << " and " << theta.q();
    throw InvalidParameterError(msg.str());
  }
  if (!theta.all_finite()) {
    throw InvalidParameterError("parameter vector has non-finite entries");
  }
}

DiffusionModel DiffusionModel::with_box(std::vector<Interval> box) const {
  ModelDefinition def = def_;
  def.param_box = std::move(box);
  return DiffusionModel(std::move(def));
}

Interval default_box(double value, bool positive) {
  if (positive && value > 0.0) return {value / 100.0, value * 100.0};
  const double half = 10.0 * std::abs(value);
  if (half == 0.0) return {-1.0, 1.0};
  return {-half, half};
}

ParamVector mean_reverting_theta(double kappa, double mean, double sigma2) {
  return ParamVector{{kappa, mean}, {sigma2}};
}

double feller_ratio(double kappa, double mean, double sigma2) {
  return 2.0 * kappa * mean / sigma2;
}

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw InvalidParameterError(std::string(what) + " must be finite");
  }
}

void require_positive(double v, const char* what) {
  require_finite(v, what);
  if (!(v > 0.0)) {
    throw InvalidParameterError(std::string(what) + " must be positive");
  }
}

}  // namespace

DiffusionModel vasicek_model(double kappa, double mean, double sigma2) {
  require_positive(kappa, "kappa");
  require_finite(mean, "mean");
  require_positive(sigma2, "sigma2");

  ModelDefinition def;
  def.kind = ModelKind::vasicek;
  def.name = "vasicek";
  def.p = 2;
  def.q = 1;
  def.drift = [](std::span<const double> a, double x) { return a[0] * (a[1] - x); };
  def.diffusion = [](std::span<const double> b, double) { return std::sqrt(b[0]); };
  def.diffusion_dx = [](std::span<const double>, double) { return 0.0; };
  def.param_box = {default_box(kappa, true), default_box(mean, false), default_box(sigma2, true)};
  def.closed_S = [](std::span<const double> b, double x, double y) {
    return (y - x) / std::sqrt(b[0]);
  };
  def.closed_H = [](const ParamVector& th, double x, double y) {
    const double k = th.alpha[0];
    const double m = th.alpha[1];
    const double s2 = th.beta[0];
    return (k / s2) * (m * (y - x) - 0.5 * (y - x) * (y + x));
  };
  def.exact_sampler = vasicek_transition_draw;
  def.reference_state = [](const ParamVector& th) { return th.alpha[1]; };
  def.nominal = mean_reverting_theta(kappa, mean, sigma2);
  return DiffusionModel(std::move(def));
}

DiffusionModel cir_model(double kappa, double mean, double sigma2) {
  require_positive(kappa, "kappa");
  require_positive(mean, "mean");
  require_positive(sigma2, "sigma2");

  ModelDefinition def;
  def.kind = ModelKind::cir;
  def.name = "cir";
  def.p = 2;
  def.q = 1;
  def.drift = [](std::span<const double> a, double x) { return a[0] * (a[1] - x); };
  def.diffusion = [](std::span<const double> b, double x) {
    return x > 0.0 ? std::sqrt(b[0] * x) : 0.0;
  };
  def.diffusion_dx = [](std::span<const double> b, double x) {
    return std::sqrt(b[0]) / (2.0 * std::sqrt(x));
  };
  def.param_box = {default_box(kappa, true), default_box(mean, true), default_box(sigma2, true)};
  def.state_lower_bound = 0.0;
  def.closed_S = [](std::span<const double> b, double x, double y) {
    return 2.0 * (std::sqrt(y) - std::sqrt(x)) / std::sqrt(b[0]);
  };
  def.closed_H = [](const ParamVector& th, double x, double y) {
    const double k = th.alpha[0];
    const double m = th.alpha[1];
    const double s2 = th.beta[0];
    const double log_ratio = std::log(y / x);
    return (k / s2) * (m * log_ratio - (y - x)) - 0.25 * log_ratio;
  };
  def.exact_sampler = cir_transition_draw;
  def.reference_state = [](const ParamVector& th) { return th.alpha[1]; };
  def.nominal = mean_reverting_theta(kappa, mean, sigma2);
  return DiffusionModel(std::move(def));
}

}  // namespace phidiv
