#pragma once

namespace phidiv {

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
// Series expansion below x = a + 1, Lentz continued fraction above.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

double chi2_pdf(double df, double x);
double chi2_log_pdf(double df, double x);
double chi2_cdf(double df, double x);
// Upper tail P(X > x), computed directly to keep precision far in the tail.
double chi2_sf(double df, double x);
// Inverse CDF to relative accuracy 1e-12 (Newton steps safeguarded by
// bisection). prob must lie in (0, 1).
double chi2_quantile(double df, double prob);

}  // namespace phidiv
