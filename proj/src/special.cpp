#include "phidiv/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phidiv/errors.hpp"

namespace phidiv {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// log(x^a e^-x / Gamma(a))
double log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

void check_args(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma needs a > 0");
  if (std::isnan(x)) throw DomainError("incomplete gamma argument is NaN");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_args(a, x);
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_args(a, x);
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chi2_log_pdf(double df, double x) {
  if (!(df > 0.0)) throw DomainError("chi-square degrees of freedom must be positive");
  if (x < 0.0) return -std::numeric_limits<double>::infinity();
  const double k = 0.5 * df;
  if (x == 0.0) {
    if (df < 2.0) return std::numeric_limits<double>::infinity();
    if (df == 2.0) return std::log(0.5);
    return -std::numeric_limits<double>::infinity();
  }
  return (k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) - std::lgamma(k);
}

double chi2_pdf(double df, double x) { return std::exp(chi2_log_pdf(df, x)); }

double chi2_cdf(double df, double x) { return regularized_gamma_p(0.5 * df, 0.5 * x); }

double chi2_sf(double df, double x) { return regularized_gamma_q(0.5 * df, 0.5 * x); }

double chi2_quantile(double df, double prob) {
  if (!(df > 0.0)) throw DomainError("chi-square degrees of freedom must be positive");
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("quantile probability must lie in (0, 1)");

  // Wilson-Hilferty starting point.
  const double z = [&] {
    // Abramowitz-Stegun 26.2.23 normal quantile; only used as a seed.
    double t = std::sqrt(-2.0 * std::log(prob < 0.5 ? prob : 1.0 - prob));
    double q = t - (2.515517 + 0.802853 * t + 0.010328 * t * t) /
                       (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t);
    return prob < 0.5 ? -q : q;
  }();
  const double c = 2.0 / (9.0 * df);
  double x = df * std::pow(std::max(1.0 - c + z * std::sqrt(c), 0.05), 3.0);
  if (!(x > 0.0) || !std::isfinite(x)) x = df;

  // Bracket the root of F(x) - prob.
  double lo = 0.0;
  double hi = std::max(x, 1.0);
  while (chi2_cdf(df, hi) < prob) {
    lo = hi;
    hi *= 2.0;
  }

  // Work with whichever tail is smaller to keep relative accuracy.
  const bool upper = prob > 0.5;
  const double target = upper ? 1.0 - prob : prob;
  auto residual = [&](double v) {
    return upper ? target - chi2_sf(df, v) : chi2_cdf(df, v) - target;
  };

  x = std::clamp(x, lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double r = residual(x);
    if (r > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double density = chi2_pdf(df, x);
    double next = (density > 0.0 && std::isfinite(density)) ? x - r / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-14 * x || hi - lo <= 1e-15 * hi) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace phidiv
