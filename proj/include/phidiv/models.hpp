#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phidiv/rng.hpp"

namespace phidiv {

// theta = (alpha, beta): alpha holds the p drift parameters, beta the q
// diffusion parameters.
struct ParamVector {
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t p() const { return alpha.size(); }
  std::size_t q() const { return beta.size(); }
  std::size_t size() const { return alpha.size() + beta.size(); }

  // Drift block followed by diffusion block.
  std::vector<double> flat() const;
  static ParamVector from_flat(std::span<const double> values, std::size_t p);

  bool all_finite() const;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v >= lower && v <= upper; }
  double clamp(double v) const;
};

enum class ModelKind { vasicek, cir, custom };

using DriftFn = std::function<double(std::span<const double> alpha, double x)>;
using DiffusionFn = std::function<double(std::span<const double> beta, double x)>;
// S(x, y, beta) = int_x^y du / sigma(beta, u)
using ClosedSFn = std::function<double(std::span<const double> beta, double x, double y)>;
// H(x, y, theta) = int_x^y { b / sigma^2 - sigma' / (2 sigma) } du
using ClosedHFn = std::function<double(const ParamVector& theta, double x, double y)>;
// d/dx of B(x, theta) = b / sigma - sigma' / 2
using ClosedBdxFn = std::function<double(const ParamVector& theta, double x)>;
// One exact transition X_{t+dt} | X_t = x.
using ExactSamplerFn =
    std::function<double(const ParamVector& theta, double x, double dt, Engine& engine)>;
using ReferenceStateFn = std::function<double(const ParamVector& theta)>;

// Everything needed to build a DiffusionModel. Built-in models fill every
// optional field; user models may leave closed forms and the sampler empty,
// in which case quadrature and Euler-Maruyama are used instead.
struct ModelDefinition {
  ModelKind kind = ModelKind::custom;
  std::string name;
  std::size_t p = 0;
  std::size_t q = 0;
  DriftFn drift;
  DiffusionFn diffusion;
  DiffusionFn diffusion_dx;
  std::vector<Interval> param_box;  // length p + q, drift block first
  double state_lower_bound = -std::numeric_limits<double>::infinity();
  ClosedSFn closed_S;
  ClosedHFn closed_H;
  ClosedBdxFn closed_B_dx;
  ExactSamplerFn exact_sampler;
  ReferenceStateFn reference_state;  // x~ used to anchor the scale function
  ParamVector nominal;               // parameter values the model was built from
};

// dX_t = b(alpha, X_t) dt + sigma(beta, X_t) dW_t
//
// Immutable after construction; safe to share between threads.
class DiffusionModel {
 public:
  explicit DiffusionModel(ModelDefinition def);

  ModelKind kind() const { return def_.kind; }
  const std::string& name() const { return def_.name; }
  std::size_t p() const { return def_.p; }
  std::size_t q() const { return def_.q; }
  std::size_t dim() const { return def_.p + def_.q; }

  double drift(const ParamVector& theta, double x) const { return def_.drift(theta.alpha, x); }
  double diffusion(const ParamVector& theta, double x) const {
    return def_.diffusion(theta.beta, x);
  }
  double diffusion_dx(const ParamVector& theta, double x) const {
    return def_.diffusion_dx(theta.beta, x);
  }
  double drift_with(std::span<const double> alpha, double x) const { return def_.drift(alpha, x); }
  double diffusion_with(std::span<const double> beta, double x) const {
    return def_.diffusion(beta, x);
  }

  const std::vector<Interval>& param_box() const { return def_.param_box; }
  bool in_box(const ParamVector& theta) const;
  double state_lower_bound() const { return def_.state_lower_bound; }

  const ClosedSFn& closed_S() const { return def_.closed_S; }
  const ClosedHFn& closed_H() const { return def_.closed_H; }
  const ClosedBdxFn& closed_B_dx() const { return def_.closed_B_dx; }
  const ExactSamplerFn& exact_sampler() const { return def_.exact_sampler; }
  bool has_exact_sampler() const { return static_cast<bool>(def_.exact_sampler); }

  double reference_state(const ParamVector& theta) const;
  const ParamVector& nominal() const { return def_.nominal; }

  // Throws InvalidParameterError unless theta has shape (p, q) and finite entries.
  void check_shape(const ParamVector& theta) const;

  // Copy with a different optimisation box.
  DiffusionModel with_box(std::vector<Interval> box) const;

 private:
  ModelDefinition def_;
};

// Default optimisation box around a nominal value: [v/100, 100 v] for
// positive parameters, [-10|v|, 10|v|] for unrestricted ones.
Interval default_box(double value, bool positive);

// dX = kappa (mean - X) dt + sqrt(sigma2) dW, theta = ((kappa, mean), (sigma2)).
DiffusionModel vasicek_model(double kappa, double mean, double sigma2);

// dX = kappa (mean - X) dt + sqrt(sigma2 X) dW, theta = ((kappa, mean), (sigma2)).
DiffusionModel cir_model(double kappa, double mean, double sigma2);

// 2 kappa mean / sigma2; the process stays strictly positive when > 1.
double feller_ratio(double kappa, double mean, double sigma2);

// Convenience: (kappa, mean, sigma2) as a ParamVector for either built-in model.
ParamVector mean_reverting_theta(double kappa, double mean, double sigma2);

}  // namespace phidiv
