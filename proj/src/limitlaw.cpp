#include "phidiv/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "phidiv/errors.hpp"
#include "phidiv/rng.hpp"
#include "phidiv/special.hpp"

namespace phidiv {
namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    std::ostringstream msg;
    msg << "level must lie in (0, 1), got " << level;
    throw InvalidParameterError(msg.str());
  }
}

void fill_block(std::vector<double>& out, std::size_t df, std::uint64_t seed, std::size_t block) {
  Engine engine = make_engine({seed, block});
  std::chi_squared_distribution<double> chi2(static_cast<double>(df));
  const std::size_t begin = block * kChi2BlockSize;
  const std::size_t end = std::min(out.size(), begin + kChi2BlockSize);
  for (std::size_t i = begin; i < end; ++i) out[i] = chi2(engine);
}

std::size_t block_count(std::size_t count) {
  return (count + kChi2BlockSize - 1) / kChi2BlockSize;
}

}  // namespace

double LimitLaw::magnitude(double chi2) const {
  switch (case_tag) {
    case PhiCase::c_only:
      return std::abs(C_phi * chi2);
    case PhiCase::k_only:
      return std::abs(0.5 * K_phi * chi2 * chi2);
    case PhiCase::c_and_k:
      return std::abs(0.5 * (C_phi * chi2 + (C_phi + K_phi) * chi2 * chi2));
  }
  return 0.0;
}

bool LimitLaw::has_analytic_form() const {
  if (case_tag != PhiCase::c_and_k) return true;
  return C_phi * (C_phi + K_phi) >= 0.0;
}

LimitLaw limit_law(const PhiFamily& family, std::size_t p, std::size_t q) {
  if (p + q < 1) throw InvalidParameterError("limit law needs p + q >= 1");
  LimitLaw law{p + q, family.C_phi, family.K_phi, family.case_tag};
  if (law.case_tag == PhiCase::c_only && law.C_phi == 0.0) {
    throw InvalidPhiError("C-only law needs a nonzero C");
  }
  if (law.case_tag == PhiCase::k_only && (std::abs(law.C_phi) >= 1e-6 || law.K_phi == 0.0)) {
    throw InvalidPhiError("K-only law needs C = 0 and a nonzero K");
  }
  return law;
}

double z_quantile(std::size_t df, double prob) {
  const double q = chi2_quantile(static_cast<double>(df), prob);
  return q * q;
}

double z_density(std::size_t df, double z) {
  if (!(z > 0.0)) throw DomainError("Z density is defined for z > 0");
  const double k = 0.5 * static_cast<double>(df);
  const double root = std::sqrt(z);
  const double log_f = -k * std::log(2.0) - std::lgamma(k) + (k - 1.0) * std::log(root) -
                       0.5 * root - std::log(2.0 * root);
  return std::exp(log_f);
}

std::vector<double> draw_chi2_serial(std::size_t df, std::size_t count, std::uint64_t seed) {
  std::vector<double> out(count);
  const std::size_t blocks = block_count(count);
  for (std::size_t b = 0; b < blocks; ++b) fill_block(out, df, seed, b);
  return out;
}

std::vector<double> draw_chi2_parallel(std::size_t df, std::size_t count, std::uint64_t seed,
                                       int workers) {
  std::vector<double> out(count);
  const auto blocks = static_cast<long long>(block_count(count));
  if (workers <= 0) {
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < blocks; ++b) fill_block(out, df, seed, static_cast<std::size_t>(b));
  } else {
#pragma omp parallel for schedule(static) num_threads(workers)
    for (long long b = 0; b < blocks; ++b) fill_block(out, df, seed, static_cast<std::size_t>(b));
  }
  return out;
}

LimitLawSample::LimitLawSample(const LimitLaw& law, std::size_t draws, std::uint64_t seed,
                               int workers) {
  if (draws < 1) throw InvalidParameterError("Monte Carlo quantiles need at least one draw");
  sorted_ = workers == 1 ? draw_chi2_serial(law.df, draws, seed)
                         : draw_chi2_parallel(law.df, draws, seed, workers);
  for (double& v : sorted_) v = law.magnitude(v);
  std::sort(sorted_.begin(), sorted_.end());
}

double LimitLawSample::threshold(double level) const {
  check_level(level);
  const double n = static_cast<double>(sorted_.size());
  auto idx = static_cast<std::size_t>(std::ceil((1.0 - level) * n));
  idx = std::clamp<std::size_t>(idx, 1, sorted_.size()) - 1;
  return sorted_[idx];
}

double LimitLawSample::p_value(double statistic) const {
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), statistic);
  return static_cast<double>(sorted_.end() - it) / static_cast<double>(sorted_.size());
}

double threshold(const LimitLaw& law, double level, const QuantileMethod& method) {
  check_level(level);
  if (method.kind == QuantileMethod::Kind::mc) {
    return LimitLawSample(law, method.draws, method.seed).threshold(level);
  }
  if (!law.has_analytic_form()) {
    throw DomainError("no analytic quantile when C and C + K differ in sign; use mc");
  }
  const double q = chi2_quantile(static_cast<double>(law.df), 1.0 - level);
  return law.magnitude(q);
}

double p_value(const LimitLaw& law, double statistic, const QuantileMethod& method) {
  if (!(statistic >= 0.0)) throw DomainError("statistic must be nonnegative");
  if (method.kind == QuantileMethod::Kind::mc) {
    return LimitLawSample(law, method.draws, method.seed).p_value(statistic);
  }
  if (!law.has_analytic_form()) {
    throw DomainError("no analytic p-value when C and C + K differ in sign; use mc");
  }
  if (statistic == 0.0) return 1.0;
  const double df = static_cast<double>(law.df);
  const double c = std::abs(law.C_phi);
  double x = 0.0;
  switch (law.case_tag) {
    case PhiCase::c_only:
      x = statistic / c;
      break;
    case PhiCase::k_only:
      x = std::sqrt(2.0 * statistic / std::abs(law.K_phi));
      break;
    case PhiCase::c_and_k: {
      // Positive root of (|C| x + |C + K| x^2) / 2 = statistic.
      const double b = std::abs(law.C_phi + law.K_phi);
      if (c == 0.0 && b == 0.0) throw DomainError("degenerate limit law");
      x = 4.0 * statistic / (c + std::sqrt(c * c + 8.0 * b * statistic));
      break;
    }
  }
  return chi2_sf(df, x);
}

}  // namespace phidiv
