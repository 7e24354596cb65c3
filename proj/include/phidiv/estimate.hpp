#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "phidiv/errors.hpp"
#include "phidiv/models.hpp"
#include "phidiv/optimize.hpp"
#include "phidiv/simulate.hpp"

namespace phidiv {

struct FitOptions {
  std::size_t restarts = 3;  // total number of starts, the first one unjittered
  double jitter = 0.1;       // log-scale sd of the multiplicative start jitter
  std::uint64_t jitter_seed = 0x5eedULL;
  NelderMeadOptions simplex;
};

struct FitResult {
  ParamVector theta_hat;
  double loglik = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t restarts_used = 0;
};

class OptimizationFailure : public Error {
 public:
  OptimizationFailure(const std::string& what, FitResult best)
      : Error(what), best_(std::move(best)) {}
  const FitResult& best() const { return best_; }

 private:
  FitResult best_;
};

// Quasi-maximum likelihood: maximises the local Gaussian log-likelihood over
// the model's parameter box by Nelder-Mead, with optional jittered restarts.
// The best converged run is returned. Throws InvalidStartError when start
// lies outside the box and OptimizationFailure when no run converges.
FitResult qmle_fit(const DiffusionModel& model, const ObservedPath& path, const ParamVector& start,
                   const FitOptions& options = {});

// Gamma = diag(1/(n delta) I_p, 1/n I_q).
struct RateMatrix {
  std::size_t n = 1;
  double delta = 1.0;

  RateMatrix(std::size_t n_obs, double step);

  Eigen::VectorXd diagonal(std::size_t p, std::size_t q) const;
  // Gamma^{-1/2} (theta_hat - theta0)
  Eigen::VectorXd studentize(const ParamVector& theta_hat, const ParamVector& theta0) const;
};

struct FisherInformation {
  Eigen::MatrixXd matrix;  // (p+q) x (p+q), block diagonal
  bool degenerate = false;
};

// I_b^{kj} = int (1/sigma^2) db/dalpha_k db/dalpha_j dmu
// I_s^{kj} = 2 int (1/sigma^2) dsigma/dbeta_k dsigma/dbeta_j dmu
// Parameter derivatives by central differences (step 1e-6 relative); mu is
// the stationary law from stationary.hpp.
FisherInformation fisher_information(const DiffusionModel& model, const ParamVector& theta0);

}  // namespace phidiv
