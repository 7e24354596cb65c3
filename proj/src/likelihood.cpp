#include "phidiv/likelihood.hpp"

#include <cmath>
#include <algorithm>
#include <sstream>

#include "phidiv/errors.hpp"

namespace phidiv {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

double positive_sigma(const DiffusionModel& model, const ParamVector& theta, double x) {
  const double s = model.diffusion(theta, x);
  if (!(s > 0.0) || !std::isfinite(s)) {
    std::ostringstream msg;
    msg << "diffusion coefficient is not positive at x = " << x;
    throw DomainError(msg.str());
  }
  return s;
}

template <typename PerPair>
double sum_transitions(const ObservedPath& path, PerPair&& term) {
  validate_path(path);
  double total = 0.0;
  for (std::size_t i = 1; i < path.x.size(); ++i) {
    try {
      total += term(path.x[i - 1], path.x[i]);
    } catch (const DomainError& e) {
      throw DomainError("transition " + std::to_string(i) + ": " + e.what());
    } catch (const NumericalIntegrationError& e) {
      throw NumericalIntegrationError("transition " + std::to_string(i) + ": " + e.what());
    }
  }
  return total;
}

}  // namespace

double S_fun(const DiffusionModel& model, const ParamVector& theta, double x, double y,
             const QuadratureSettings& settings) {
  if (x == y) return 0.0;
  if (model.closed_S()) return model.closed_S()(theta.beta, x, y);
  return integrate([&](double u) { return 1.0 / positive_sigma(model, theta, u); }, x, y,
                   settings);
}

double H_fun(const DiffusionModel& model, const ParamVector& theta, double x, double y,
             const QuadratureSettings& settings) {
  if (x == y) return 0.0;
  if (model.closed_H()) return model.closed_H()(theta, x, y);
  return integrate(
      [&](double u) {
        const double s = positive_sigma(model, theta, u);
        return model.drift(theta, u) / (s * s) - 0.5 * model.diffusion_dx(theta, u) / s;
      },
      x, y, settings);
}

double B_fun(const DiffusionModel& model, const ParamVector& theta, double x) {
  const double s = positive_sigma(model, theta, x);
  return model.drift(theta, x) / s - 0.5 * model.diffusion_dx(theta, x);
}

double B_dx_numeric(const DiffusionModel& model, const ParamVector& theta, double x) {
  const double h = std::max(1e-6, 1e-6 * std::abs(x));
  return (B_fun(model, theta, x + h) - B_fun(model, theta, x - h)) / (2.0 * h);
}

double B_dx(const DiffusionModel& model, const ParamVector& theta, double x) {
  if (model.closed_B_dx()) return model.closed_B_dx()(theta, x);
  return B_dx_numeric(model, theta, x);
}

double C_fun(const DiffusionModel& model, const ParamVector& theta, double x) {
  const double b = B_fun(model, theta, x);
  return b * b / 3.0 + 0.5 * B_dx(model, theta, x) * model.diffusion(theta, x);
}

double g_tilde(const DiffusionModel& model, const ParamVector& theta, double x, double y) {
  return -0.5 * (C_fun(model, theta, x) + C_fun(model, theta, y) +
                 B_fun(model, theta, x) * B_fun(model, theta, y) / 3.0);
}

double dcfz_log_transition(const DiffusionModel& model, const ParamVector& theta, double x,
                           double y, double t, const QuadratureSettings& settings) {
  if (!(t > 0.0)) throw DomainError("transition lag must be positive");
  const double sigma_y = positive_sigma(model, theta, y);
  const double s = S_fun(model, theta, x, y, settings);
  return -0.5 * (kLog2Pi + std::log(t)) - std::log(sigma_y) - s * s / (2.0 * t) +
         H_fun(model, theta, x, y, settings) + t * g_tilde(model, theta, x, y);
}

double dcfz_loglik(const DiffusionModel& model, const ParamVector& theta,
                   const ObservedPath& path, const QuadratureSettings& settings) {
  model.check_shape(theta);
  return sum_transitions(path, [&](double x, double y) {
    return dcfz_log_transition(model, theta, x, y, path.delta, settings);
  });
}

double local_gauss_log(const DiffusionModel& model, const ParamVector& theta, double x, double y,
                       double t) {
  if (!(t > 0.0)) throw DomainError("transition lag must be positive");
  const double s = positive_sigma(model, theta, x);
  const double resid = y - x - t * model.drift(theta, x);
  return -0.5 * (kLog2Pi + std::log(t)) - std::log(s) - resid * resid / (2.0 * t * s * s);
}

double local_gauss_loglik(const DiffusionModel& model, const ParamVector& theta,
                          const ObservedPath& path) {
  model.check_shape(theta);
  return sum_transitions(
      path, [&](double x, double y) { return local_gauss_log(model, theta, x, y, path.delta); });
}

}  // namespace phidiv
