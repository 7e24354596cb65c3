#include "phidiv/estimate.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "phidiv/likelihood.hpp"
#include "phidiv/stationary.hpp"

namespace phidiv {
namespace {

std::vector<double> jittered_start(const std::vector<double>& start,
                                   const std::vector<Interval>& box, double jitter,
                                   Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(start.size());
  for (std::size_t i = 0; i < start.size(); ++i) {
    const double z = normal(engine);
    if (start[i] != 0.0) {
      x[i] = start[i] * std::exp(jitter * z);
    } else {
      const double width = box[i].upper - box[i].lower;
      x[i] = std::isfinite(width) ? jitter * 0.5 * width * z : jitter * z;
    }
    x[i] = box[i].clamp(x[i]);
  }
  return x;
}

}  // namespace

FitResult qmle_fit(const DiffusionModel& model, const ObservedPath& path, const ParamVector& start,
                   const FitOptions& options) {
  model.check_shape(start);
  validate_path(path);
  if (!model.in_box(start)) throw InvalidStartError("start value lies outside the parameter box");
  if (options.restarts < 1) throw InvalidParameterError("restarts must be at least 1");

  const std::size_t p = model.p();
  const Objective objective = [&](std::span<const double> x) {
    const ParamVector theta = ParamVector::from_flat(x, p);
    try {
      return -local_gauss_loglik(model, theta, path);
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const std::vector<double> x0 = start.flat();
  const std::vector<Interval>& box = model.param_box();
  Engine engine = make_engine({options.jitter_seed, 0});

  FitResult best_converged;
  FitResult best_any;
  bool have_converged = false;
  bool have_any = false;
  std::size_t total_iterations = 0;

  for (std::size_t r = 0; r < options.restarts; ++r) {
    const std::vector<double> from = r == 0 ? x0 : jittered_start(x0, box, options.jitter, engine);
    const NelderMeadResult nm = nelder_mead_box(objective, from, box, options.simplex);
    total_iterations += nm.iterations;
    FitResult fit;
    fit.theta_hat = ParamVector::from_flat(nm.x, p);
    fit.loglik = -nm.value;
    fit.converged = nm.converged && std::isfinite(nm.value);
    if (!have_any || fit.loglik > best_any.loglik) {
      best_any = fit;
      have_any = true;
    }
    if (fit.converged && (!have_converged || fit.loglik > best_converged.loglik)) {
      best_converged = fit;
      have_converged = true;
    }
  }

  FitResult& out = have_converged ? best_converged : best_any;
  out.iterations = total_iterations;
  out.restarts_used = options.restarts;
  if (!have_converged) {
    std::ostringstream msg;
    msg << "no optimisation run converged after " << options.restarts << " start(s)";
    throw OptimizationFailure(msg.str(), out);
  }
  return out;
}

RateMatrix::RateMatrix(std::size_t n_obs, double step) : n(n_obs), delta(step) {
  if (n_obs < 1 || !(step > 0.0)) throw InvalidParameterError("rate matrix needs n >= 1, delta > 0");
}

Eigen::VectorXd RateMatrix::diagonal(std::size_t p, std::size_t q) const {
  Eigen::VectorXd d(static_cast<Eigen::Index>(p + q));
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < p; ++i) d(static_cast<Eigen::Index>(i)) = 1.0 / (nn * delta);
  for (std::size_t i = 0; i < q; ++i) d(static_cast<Eigen::Index>(p + i)) = 1.0 / nn;
  return d;
}

Eigen::VectorXd RateMatrix::studentize(const ParamVector& theta_hat,
                                       const ParamVector& theta0) const {
  const std::vector<double> a = theta_hat.flat();
  const std::vector<double> b = theta0.flat();
  const Eigen::VectorXd d = diagonal(theta0.p(), theta0.q());
  Eigen::VectorXd z(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    z(i) = (a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]) / std::sqrt(d(i));
  }
  return z;
}

FisherInformation fisher_information(const DiffusionModel& model, const ParamVector& theta0) {
  model.check_shape(theta0);
  const StationaryDensity mu(model, theta0);
  const std::size_t p = model.p();
  const std::size_t q = model.q();

  auto step = [](double v) { return v != 0.0 ? 1e-6 * std::abs(v) : 1e-6; };

  // d/d(param_k) of an evaluator taking a parameter block.
  auto block_gradient = [&](const std::vector<double>& block, std::size_t k, double x,
                            auto&& eval) {
    std::vector<double> up = block;
    std::vector<double> down = block;
    const double h = step(block[k]);
    up[k] += h;
    down[k] -= h;
    return (eval(up, x) - eval(down, x)) / (2.0 * h);
  };
  auto drift_eval = [&](const std::vector<double>& a, double x) { return model.drift_with(a, x); };
  auto diff_eval = [&](const std::vector<double>& b, double x) {
    return model.diffusion_with(b, x);
  };

  FisherInformation info;
  info.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p + q),
                                      static_cast<Eigen::Index>(p + q));
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t j = k; j < p; ++j) {
      const double v = mu.expect([&](double x) {
        const double s = model.diffusion(theta0, x);
        return block_gradient(theta0.alpha, k, x, drift_eval) *
               block_gradient(theta0.alpha, j, x, drift_eval) / (s * s);
      });
      info.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v;
      info.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v;
    }
  }
  for (std::size_t k = 0; k < q; ++k) {
    for (std::size_t j = k; j < q; ++j) {
      const double v = 2.0 * mu.expect([&](double x) {
        const double s = model.diffusion(theta0, x);
        return block_gradient(theta0.beta, k, x, diff_eval) *
               block_gradient(theta0.beta, j, x, diff_eval) / (s * s);
      });
      const auto r = static_cast<Eigen::Index>(p + k);
      const auto c = static_cast<Eigen::Index>(p + j);
      info.matrix(r, c) = v;
      info.matrix(c, r) = v;
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info.matrix);
  const double largest = eig.eigenvalues().cwiseAbs().maxCoeff();
  info.degenerate = !(eig.eigenvalues().minCoeff() > 1e-12 * largest);
  return info;
}

}  // namespace phidiv
