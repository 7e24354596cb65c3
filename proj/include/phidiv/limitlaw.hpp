#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "phidiv/phi_family.hpp"

namespace phidiv {

// Limiting law of the statistic under H0, as a function of X ~ chi^2_df:
//   C-only:   C X
//   K-only:   (K/2) X^2
//   C-and-K:  (C X + (C + K) X^2) / 2
// Thresholds and p-values refer to |L|, which matches the nonnegative
// statistic produced by the ratio swap.
struct LimitLaw {
  std::size_t df = 1;
  double C_phi = 0.0;
  double K_phi = 0.0;
  PhiCase case_tag = PhiCase::c_and_k;

  // |L| for a given chi-square value.
  double magnitude(double chi2) const;
  // True when |L| is a monotone transform of X, so exact quantiles exist.
  bool has_analytic_form() const;
};

LimitLaw limit_law(const PhiFamily& family, std::size_t p, std::size_t q);

// Z = (chi^2_df)^2, so its quantile is the squared chi-square quantile.
double z_quantile(std::size_t df, double prob);

// Density of Z at z > 0; throws DomainError otherwise.
double z_density(std::size_t df, double z);

struct QuantileMethod {
  enum class Kind { analytic, mc };
  Kind kind = Kind::analytic;
  std::size_t draws = 100000;
  std::uint64_t seed = 0x9a3e17ULL;

  static QuantileMethod analytic() { return {}; }
  static QuantileMethod mc(std::size_t draws, std::uint64_t seed = 0x9a3e17ULL) {
    return {Kind::mc, draws, seed};
  }
};

// chi^2_df draws in fixed blocks; block b uses stream (seed, b), so the
// output is identical whichever variant runs. draw_chi2_parallel spreads the
// blocks over OpenMP threads (workers == 0 means the OpenMP default).
inline constexpr std::size_t kChi2BlockSize = 4096;
std::vector<double> draw_chi2_serial(std::size_t df, std::size_t count, std::uint64_t seed);
std::vector<double> draw_chi2_parallel(std::size_t df, std::size_t count, std::uint64_t seed,
                                       int workers = 0);

// Sorted Monte Carlo sample of |L|.
class LimitLawSample {
 public:
  LimitLawSample(const LimitLaw& law, std::size_t draws, std::uint64_t seed, int workers = 0);

  // Empirical (1 - level) quantile.
  double threshold(double level) const;
  // Fraction of draws >= statistic.
  double p_value(double statistic) const;
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

// Rejection threshold c with P(|L| > c) = level. The analytic method throws
// DomainError for laws without an analytic form.
double threshold(const LimitLaw& law, double level, const QuantileMethod& method);

// P(|L| >= statistic).
double p_value(const LimitLaw& law, double statistic, const QuantileMethod& method);

}  // namespace phidiv
