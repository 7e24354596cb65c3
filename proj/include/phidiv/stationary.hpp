#pragma once

#include <functional>
#include <optional>

#include "phidiv/models.hpp"
#include "phidiv/phi_family.hpp"
#include "phidiv/quadrature.hpp"

namespace phidiv {

// Invariant density pi(x) = m(x) / M of an ergodic diffusion, with speed
// density m = 1 / (sigma^2 s) and scale density
// s(x) = exp(-2 int_{x~}^x b / sigma^2 dy).
//
// The log-speed density is evaluated through H: int b/sigma^2 = H + log(sigma(x)/sigma(x~))/2,
// so closed forms of H carry over. The support is truncated where the density
// has fallen by e^-40 relative to x~, which leaves tail mass far below 1e-8.
class StationaryDensity {
 public:
  StationaryDensity(const DiffusionModel& model, ParamVector theta,
                    std::optional<double> anchor = std::nullopt);

  double log_pdf(double x) const;
  double pdf(double x) const;
  Interval support() const { return support_; }
  double anchor() const { return anchor_; }

  // int g(x) pi(x) dx over the truncated support.
  double expect(const std::function<double(double)>& g) const;

 private:
  double log_speed(double x) const;  // relative to the anchor

  DiffusionModel model_;
  ParamVector theta_;
  double anchor_;
  double log_sigma_anchor_;
  Interval support_;
  double log_norm_ = 0.0;
};

// Settings used for stationary-law integrals.
QuadratureSettings stationary_quadrature();

double invariant_density(const DiffusionModel& model, const ParamVector& theta, double x);

// int phi(pi_theta / pi_theta0) pi_theta0 dx over the union of both supports.
double invariant_divergence(const DiffusionModel& model, const PhiFamily& phi,
                            const ParamVector& theta, const ParamVector& theta0);

}  // namespace phidiv
