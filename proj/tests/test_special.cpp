#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "phidiv/special.hpp"

using namespace phidiv;

namespace bm = boost::math;

TEST(Special, RegularizedGammaMatchesBoost) {
  for (double a : {0.5, 1.0, 1.5, 2.5, 7.0, 30.0}) {
    for (double x : {1e-6, 0.1, 0.9, 2.0, 5.5, 12.0, 40.0, 90.0}) {
      const double p = bm::gamma_p(a, x);
      const double q = bm::gamma_q(a, x);
      EXPECT_NEAR(regularized_gamma_p(a, x), p, 1e-13 + 1e-12 * p) << a << ' ' << x;
      EXPECT_NEAR(regularized_gamma_q(a, x), q, 1e-300 + 1e-11 * q) << a << ' ' << x;
    }
  }
  EXPECT_EQ(regularized_gamma_p(2.0, 0.0), 0.0);
  EXPECT_EQ(regularized_gamma_q(2.0, 0.0), 1.0);
}

TEST(Special, ChiSquareDistributionMatchesBoost) {
  for (double df : {1.0, 2.0, 3.0, 5.0, 10.0}) {
    const bm::chi_squared_distribution<double> d(df);
    for (double x : {0.01, 0.5, 1.0, 3.0, 7.8, 20.0, 60.0}) {
      EXPECT_NEAR(chi2_pdf(df, x), bm::pdf(d, x), 1e-13 + 1e-11 * bm::pdf(d, x));
      EXPECT_NEAR(chi2_log_pdf(df, x), std::log(bm::pdf(d, x)), 1e-11);
      EXPECT_NEAR(chi2_cdf(df, x), bm::cdf(d, x), 1e-13);
      const double sf = bm::cdf(bm::complement(d, x));
      EXPECT_NEAR(chi2_sf(df, x), sf, 1e-300 + 1e-11 * sf);
    }
  }
  EXPECT_EQ(chi2_pdf(3.0, -1.0), 0.0);
  EXPECT_EQ(chi2_cdf(3.0, -1.0), 0.0);
  EXPECT_EQ(chi2_sf(3.0, -1.0), 1.0);
}

TEST(Special, ChiSquareQuantileMatchesBoost) {
  for (double df : {1.0, 2.0, 3.0, 4.0, 5.0, 12.0, 50.0}) {
    const bm::chi_squared_distribution<double> d(df);
    for (double p : {1e-8, 1e-3, 0.05, 0.3, 0.5, 0.9, 0.95, 0.99, 0.999, 1 - 1e-9}) {
      const double q = bm::quantile(d, p);
      EXPECT_NEAR(chi2_quantile(df, p), q, 1e-10 * q) << df << ' ' << p;
    }
  }
}

TEST(Special, KnownQuantiles) {
  EXPECT_NEAR(chi2_quantile(3, 0.95), 7.814727903251178, 1e-9);
  EXPECT_NEAR(chi2_quantile(3, 0.99), 11.344866730144373, 1e-9);
  EXPECT_NEAR(chi2_pdf(3, 1.0), 0.24197072451914337, 1e-12);
}

TEST(Special, QuantileInvertsCdf) {
  for (double df : {1.0, 3.0, 7.0}) {
    for (double p = 0.01; p < 1.0; p += 0.07) {
      EXPECT_NEAR(chi2_cdf(df, chi2_quantile(df, p)), p, 1e-12);
    }
  }
}
