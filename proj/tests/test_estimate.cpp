#include <gtest/gtest.h>

#include <cmath>

#include "phidiv/errors.hpp"
#include "phidiv/estimate.hpp"
#include "phidiv/likelihood.hpp"
#include "test_support.hpp"

using namespace phidiv;
using namespace phidiv::testing;

namespace {

ParamVector scaled(const ParamVector& th, double f) {
  return mean_reverting_theta(f * th.alpha[0], f * th.alpha[1], f * th.beta[0]);
}

}  // namespace

TEST(Qmle, PureScaleMatchesClosedForm) {
  const DiffusionModel m = pure_scale_model(0.04);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ObservedPath p = simulate_euler(m, ParamVector{{}, {0.04}}, 0.0, 500, 0.01, 1, {seed, 0});
    double ss = 0.0;
    for (std::size_t i = 1; i < p.x.size(); ++i) ss += (p.x[i] - p.x[i - 1]) * (p.x[i] - p.x[i - 1]);
    const double expected = ss / (500 * 0.01);
    const FitResult fit = qmle_fit(m, p, ParamVector{{}, {0.04}});
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(fit.theta_hat.beta[0], expected, 1e-6 * expected);
  }
}

TEST(Qmle, VasicekConsistency) {
  const DiffusionModel m = vas0_model();
  const ObservedPath p = simulate(m, vas0(), kVasMean, 10000, 0.01, {2024, 0});
  const FitResult fit = qmle_fit(m, p, scaled(vas0(), 2.0));
  ASSERT_TRUE(fit.converged);
  EXPECT_NEAR(fit.theta_hat.alpha[0], kVasKappa, 0.10 * kVasKappa);
  EXPECT_NEAR(fit.theta_hat.alpha[1], kVasMean, 0.10 * kVasMean);
  EXPECT_NEAR(fit.theta_hat.beta[0], kVasSigma2, 0.05 * kVasSigma2);
}

TEST(Qmle, MaximiserDominatesStart) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DiffusionModel m = cir0_model();
    const ObservedPath p = simulate(m, cir0(), kCirMean, 300, 0.01, {seed, 0});
    const FitResult fit = qmle_fit(m, p, cir0());
    EXPECT_GE(fit.loglik, local_gauss_loglik(m, cir0(), p));
    EXPECT_DOUBLE_EQ(fit.loglik, local_gauss_loglik(m, fit.theta_hat, p));
    EXPECT_TRUE(m.in_box(fit.theta_hat));
  }
}

TEST(Qmle, MoreRestartsNeverWorse) {
  const DiffusionModel m = vas0_model();
  const ObservedPath p = simulate(m, vas0(), kVasMean, 200, 0.1, {5, 0});
  FitOptions one;
  one.restarts = 1;
  FitOptions five;
  five.restarts = 5;
  const FitResult a = qmle_fit(m, p, scaled(vas0(), 3.0), one);
  const FitResult b = qmle_fit(m, p, scaled(vas0(), 3.0), five);
  EXPECT_GE(b.loglik, a.loglik);
  EXPECT_EQ(a.restarts_used, 1u);
  EXPECT_EQ(b.restarts_used, 5u);
}

TEST(Qmle, Deterministic) {
  const DiffusionModel m = cir0_model();
  const ObservedPath p = simulate(m, cir0(), kCirMean, 200, 0.01, {6, 0});
  const FitResult a = qmle_fit(m, p, cir0());
  const FitResult b = qmle_fit(m, p, cir0());
  EXPECT_EQ(a.theta_hat, b.theta_hat);
  EXPECT_EQ(a.loglik, b.loglik);
}

TEST(Qmle, StartOutsideBoxRejected) {
  const DiffusionModel m = vas0_model();
  const ObservedPath p = simulate(m, vas0(), kVasMean, 50, 0.1, {1, 0});
  EXPECT_THROW(qmle_fit(m, p, scaled(vas0(), 1000.0)), InvalidStartError);
}

TEST(Qmle, NonConvergenceCarriesBestSoFar) {
  const DiffusionModel m = vas0_model();
  const ObservedPath p = simulate(m, vas0(), kVasMean, 100, 0.1, {1, 0});
  FitOptions opt;
  opt.restarts = 2;
  opt.simplex.max_iterations = 3;
  try {
    qmle_fit(m, p, vas0(), opt);
    FAIL() << "expected OptimizationFailure";
  } catch (const OptimizationFailure& e) {
    EXPECT_TRUE(std::isfinite(e.best().loglik));
    EXPECT_FALSE(e.best().converged);
  }
}

TEST(RateMatrix, DiagonalAndStudentize) {
  const RateMatrix g(2000, 0.01);
  const Eigen::VectorXd d = g.diagonal(2, 1);
  EXPECT_DOUBLE_EQ(d(0), 1.0 / 20.0);
  EXPECT_DOUBLE_EQ(d(1), 1.0 / 20.0);
  EXPECT_DOUBLE_EQ(d(2), 1.0 / 2000.0);
  const Eigen::VectorXd z = g.studentize(mean_reverting_theta(1.1, 0.2, 0.03), mean_reverting_theta(1.0, 0.1, 0.02));
  EXPECT_NEAR(z(0), std::sqrt(20.0) * 0.1, 1e-12);
  EXPECT_NEAR(z(1), std::sqrt(20.0) * 0.1, 1e-12);
  EXPECT_NEAR(z(2), std::sqrt(2000.0) * 0.01, 1e-12);
  EXPECT_THROW(RateMatrix(0, 0.1), InvalidParameterError);
  EXPECT_THROW(RateMatrix(10, 0.0), InvalidParameterError);
}

TEST(Fisher, VasicekClosedForm) {
  const FisherInformation info = fisher_information(vas0_model(), vas0());
  ASSERT_EQ(info.matrix.rows(), 3);
  EXPECT_FALSE(info.degenerate);
  const double s4 = kVasSigma2 * kVasSigma2;
  EXPECT_NEAR(info.matrix(0, 0), 1.0 / (2 * kVasKappa), 1e-6 / (2 * kVasKappa));
  EXPECT_NEAR(info.matrix(1, 1), kVasKappa * kVasKappa / kVasSigma2,
              1e-6 * kVasKappa * kVasKappa / kVasSigma2);
  EXPECT_NEAR(info.matrix(2, 2), 1.0 / (2 * s4), 1e-6 / (2 * s4));
  EXPECT_NEAR(info.matrix(0, 1), 0.0, 1e-6);
  EXPECT_EQ(info.matrix(0, 2), 0.0);
  EXPECT_EQ(info.matrix(1, 2), 0.0);
  EXPECT_EQ(info.matrix(2, 0), 0.0);
  EXPECT_EQ(info.matrix(2, 1), 0.0);
}

TEST(Fisher, CirGammaMoments) {
  // Stationary Gamma(shape a, scale s): E[1/X] = 1 / (s (a - 1)).
  const double a = 2 * kCirKappa * kCirMean / kCirSigma2;
  const double s = kCirSigma2 / (2 * kCirKappa);
  const double inv_mean = 1.0 / (s * (a - 1));
  const double i_kk = (kCirMean * kCirMean * inv_mean - kCirMean) / kCirSigma2;
  const double i_ka = kCirKappa * (kCirMean * inv_mean - 1.0) / kCirSigma2;
  const double i_aa = kCirKappa * kCirKappa * inv_mean / kCirSigma2;
  const double i_ss = 1.0 / (2 * kCirSigma2 * kCirSigma2);
  const FisherInformation info = fisher_information(cir0_model(), cir0());
  EXPECT_NEAR(info.matrix(0, 0), i_kk, 1e-6 * i_kk);
  EXPECT_NEAR(info.matrix(0, 1), i_ka, 1e-6 * std::abs(i_ka));
  EXPECT_NEAR(info.matrix(1, 1), i_aa, 1e-6 * i_aa);
  EXPECT_NEAR(info.matrix(2, 2), i_ss, 1e-6 * i_ss);
}

TEST(Fisher, SymmetricPositiveSemidefinite) {
  for (const auto& [m, th] : {std::pair{vas0_model(), vas0()}, std::pair{cir0_model(), cir0()}}) {
    const FisherInformation info = fisher_information(m, th);
    EXPECT_TRUE(info.matrix.isApprox(info.matrix.transpose(), 1e-14));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info.matrix);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(Fisher, DegenerateFlagged) {
  // The drift parameter never enters the drift: zero information.
  ModelDefinition def;
  def.name = "flat";
  def.p = 1;
  def.q = 1;
  def.drift = [](std::span<const double>, double x) { return -x; };
  def.diffusion = [](std::span<const double> b, double) { return b[0]; };
  def.diffusion_dx = [](std::span<const double>, double) { return 0.0; };
  const DiffusionModel m(def);
  const FisherInformation info = fisher_information(m, ParamVector{{1.0}, {0.5}});
  EXPECT_TRUE(info.degenerate);
}

TEST(Qmle, StudentizedErrorsMatchInverseInformation) {
  const DiffusionModel m = vas0_model();
  const std::size_t n = 2000;
  const double delta = 0.01;
  const RateMatrix gamma(n, delta);
  const Eigen::MatrixXd inv = fisher_information(m, vas0()).matrix.inverse();
  const int reps = 200;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(3), sum2 = Eigen::VectorXd::Zero(3);
  for (int r = 0; r < reps; ++r) {
    const ObservedPath p = simulate_stationary(m, vas0(), kVasMean, n, delta, n + 1000,
                                               {777, static_cast<std::uint64_t>(r)});
    FitOptions opt;
    opt.restarts = 1;
    const FitResult fit = qmle_fit(m, p, vas0(), opt);
    const Eigen::VectorXd z = gamma.studentize(fit.theta_hat, vas0());
    sum += z;
    sum2 += z.cwiseProduct(z);
  }
  for (int k = 0; k < 3; ++k) {
    const double mean = sum(k) / reps;
    const double var = sum2(k) / reps - mean * mean;
    EXPECT_GT(var, inv(k, k) / 3.0) << k;
    EXPECT_LT(var, inv(k, k) * 3.0) << k;
  }
}
