#include "phidiv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "phidiv/errors.hpp"

namespace phidiv {

void validate_path(const ObservedPath& path) {
  if (path.x.size() < 2) {
    throw LengthError("path needs at least two observations");
  }
  if (!(path.delta > 0.0) || !std::isfinite(path.delta)) {
    throw InvalidParameterError("path step must be positive and finite");
  }
  for (std::size_t i = 0; i < path.x.size(); ++i) {
    if (!std::isfinite(path.x[i])) {
      throw InvalidParameterError("path value at index " + std::to_string(i) + " is not finite");
    }
  }
}

double vasicek_conditional_mean(const ParamVector& theta, double x, double dt) {
  const double k = theta.alpha[0];
  const double m = theta.alpha[1];
  return m + (x - m) * std::exp(-k * dt);
}

double vasicek_conditional_variance(const ParamVector& theta, double dt) {
  const double k = theta.alpha[0];
  const double s2 = theta.beta[0];
  return -s2 * std::expm1(-2.0 * k * dt) / (2.0 * k);
}

double cir_conditional_mean(const ParamVector& theta, double x, double dt) {
  return vasicek_conditional_mean(theta, x, dt);
}

double cir_conditional_variance(const ParamVector& theta, double x, double dt) {
  const double k = theta.alpha[0];
  const double m = theta.alpha[1];
  const double s2 = theta.beta[0];
  const double e = std::exp(-k * dt);
  const double one_minus_e = -std::expm1(-k * dt);
  return x * s2 * e * one_minus_e / k + m * s2 * one_minus_e * one_minus_e / (2.0 * k);
}

double vasicek_transition_draw(const ParamVector& theta, double x, double dt, Engine& engine) {
  const double mean = vasicek_conditional_mean(theta, x, dt);
  const double sd = std::sqrt(vasicek_conditional_variance(theta, dt));
  return mean + sd * standard_normal(engine);
}

// X_{t+dt} = c * chi'^2_d(lambda) with c = sigma2 (1 - e^{-k dt}) / (4k),
// d = 4 k m / sigma2, lambda = x e^{-k dt} / c. The noncentral chi-square is
// drawn as a Poisson(lambda / 2) mixture of Gamma(d / 2 + N, 2).
double cir_transition_draw(const ParamVector& theta, double x, double dt, Engine& engine) {
  const double k = theta.alpha[0];
  const double m = theta.alpha[1];
  const double s2 = theta.beta[0];
  const double c = -s2 * std::expm1(-k * dt) / (4.0 * k);
  if (!(c > 0.0)) {
    return std::max(cir_conditional_mean(theta, x, dt), kStateFloor);
  }
  const double d = 4.0 * k * m / s2;
  const double lambda = x * std::exp(-k * dt) / c;
  std::poisson_distribution<long long> poisson(0.5 * lambda);
  const long long mix = lambda > 0.0 ? poisson(engine) : 0;
  std::gamma_distribution<double> gamma(0.5 * d + static_cast<double>(mix), 2.0);
  return std::max(c * gamma(engine), kStateFloor);
}

namespace {

void check_common(const DiffusionModel& model, const ParamVector& theta, std::size_t n,
                  double delta) {
  model.check_shape(theta);
  if (n < 1) throw LengthError("path length n must be at least 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidParameterError("delta must be positive and finite");
  }
}

template <typename Step>
ObservedPath run_chain(double x0, std::size_t n, double delta, const std::string& tag,
                       Step&& step) {
  ObservedPath path;
  path.delta = delta;
  path.model_tag = tag;
  path.x.resize(n + 1);
  path.x[0] = x0;
  for (std::size_t i = 1; i <= n; ++i) {
    path.x[i] = step(path.x[i - 1]);
  }
  return path;
}

}  // namespace

ObservedPath simulate_vasicek_exact(const DiffusionModel& model, const ParamVector& theta0,
                                    double x0, std::size_t n, double delta, SeedSpec seed) {
  if (model.kind() != ModelKind::vasicek) {
    throw WrongModelError("exact Vasicek sampler called with model '" + model.name() + "'");
  }
  check_common(model, theta0, n, delta);
  if (!std::isfinite(x0)) throw InvalidStartError("x0 must be finite");
  Engine engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double decay = std::exp(-theta0.alpha[0] * delta);
  const double sd = std::sqrt(vasicek_conditional_variance(theta0, delta));
  const double m = theta0.alpha[1];
  return run_chain(x0, n, delta, model.name(),
                   [&](double x) { return m + (x - m) * decay + sd * normal(engine); });
}

ObservedPath simulate_cir_exact(const DiffusionModel& model, const ParamVector& theta0,
                                double x0, std::size_t n, double delta, SeedSpec seed) {
  if (model.kind() != ModelKind::cir) {
    throw WrongModelError("exact CIR sampler called with model '" + model.name() + "'");
  }
  check_common(model, theta0, n, delta);
  if (!(x0 > 0.0) || !std::isfinite(x0)) {
    throw InvalidStartError("CIR start value must be positive");
  }
  Engine engine = make_engine(seed);
  return run_chain(x0, n, delta, model.name(),
                   [&](double x) { return cir_transition_draw(theta0, x, delta, engine); });
}

ObservedPath simulate_euler(const DiffusionModel& model, const ParamVector& theta0, double x0,
                            std::size_t n, double delta, std::size_t substeps, SeedSpec seed) {
  check_common(model, theta0, n, delta);
  if (substeps < 1) throw InvalidParameterError("substeps must be at least 1");
  if (!std::isfinite(x0)) throw InvalidStartError("x0 must be finite");
  const double lb = model.state_lower_bound();
  const bool clamp = std::isfinite(lb);
  const double floor = lb + kStateFloor;
  if (clamp && x0 < lb) throw InvalidStartError("x0 below the state space");

  Engine engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double h = delta / static_cast<double>(substeps);
  const double sqrt_h = std::sqrt(h);
  return run_chain(x0, n, delta, model.name(), [&](double x) {
    for (std::size_t s = 0; s < substeps; ++s) {
      x += model.drift(theta0, x) * h + model.diffusion(theta0, x) * sqrt_h * normal(engine);
      if (clamp && x < floor) x = floor;
    }
    return x;
  });
}

ObservedPath simulate(const DiffusionModel& model, const ParamVector& theta0, double x0,
                      std::size_t n, double delta, SeedSpec seed) {
  switch (model.kind()) {
    case ModelKind::vasicek:
      return simulate_vasicek_exact(model, theta0, x0, n, delta, seed);
    case ModelKind::cir:
      return simulate_cir_exact(model, theta0, x0, n, delta, seed);
    case ModelKind::custom:
      break;
  }
  if (model.has_exact_sampler()) {
    check_common(model, theta0, n, delta);
    Engine engine = make_engine(seed);
    const ExactSamplerFn& draw = model.exact_sampler();
    return run_chain(x0, n, delta, model.name(),
                     [&](double x) { return draw(theta0, x, delta, engine); });
  }
  return simulate_euler(model, theta0, x0, n, delta, 64, seed);
}

ObservedPath burn_in_extract(const ObservedPath& full, std::size_t n_keep) {
  if (full.x.empty() || n_keep + 1 > full.x.size()) {
    throw LengthError("cannot keep " + std::to_string(n_keep) + " transitions of a path with " +
                      std::to_string(full.n()));
  }
  ObservedPath out;
  out.delta = full.delta;
  out.model_tag = full.model_tag;
  out.x.assign(full.x.end() - static_cast<std::ptrdiff_t>(n_keep + 1), full.x.end());
  return out;
}

ObservedPath simulate_stationary(const DiffusionModel& model, const ParamVector& theta0,
                                 double x0, std::size_t n_keep, double delta,
                                 std::size_t burn_in_total, SeedSpec seed) {
  if (n_keep > burn_in_total) {
    throw LengthError("n exceeds the burn-in run length");
  }
  return burn_in_extract(simulate(model, theta0, x0, burn_in_total, delta, seed), n_keep);
}

void write_path_csv(std::ostream& out, const ObservedPath& path) {
  const auto old_precision = out.precision(17);
  out << "t,x\n";
  for (std::size_t i = 0; i < path.x.size(); ++i) {
    out << static_cast<double>(i) * path.delta << ',' << path.x[i] << '\n';
  }
  out.precision(old_precision);
}

ObservedPath read_path_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameterError("empty path file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x") throw InvalidParameterError("path file must start with header 't,x'");

  std::vector<double> t;
  ObservedPath path;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InvalidParameterError("malformed path row " + std::to_string(row));
    }
    try {
      std::size_t used = 0;
      const std::string ts = line.substr(0, comma);
      const std::string xs = line.substr(comma + 1);
      const double tv = std::stod(ts, &used);
      if (used != ts.size()) throw std::invalid_argument(ts);
      const double xv = std::stod(xs, &used);
      if (used != xs.size()) throw std::invalid_argument(xs);
      t.push_back(tv);
      path.x.push_back(xv);
    } catch (const std::logic_error&) {
      throw InvalidParameterError("malformed number in path row " + std::to_string(row));
    }
  }
  if (t.size() < 2) throw LengthError("path file needs at least two rows");
  path.delta = t[1] - t[0];
  validate_path(path);
  return path;
}

}  // namespace phidiv
