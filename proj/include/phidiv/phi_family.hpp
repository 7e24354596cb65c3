#pragma once

#include <functional>
#include <optional>
#include <string>

namespace phidiv {

// Which constants of phi enter the limiting law.
enum class PhiCase { c_only, k_only, c_and_k };

const char* to_string(PhiCase c);

enum class PhiKind { alpha, power, log, custom };

// A phi function with phi(1) = 0, evaluated on the log-likelihood-ratio scale
// so the ratio itself is never formed. C = phi'(1), K = phi''(1).
struct PhiFamily {
  std::string name;
  PhiKind kind = PhiKind::custom;
  double param = 0.0;  // alpha or lambda; 0 for log and custom families
  std::function<double(double)> eval_from_logratio;
  double C_phi = 0.0;
  double K_phi = 0.0;
  PhiCase case_tag = PhiCase::c_and_k;

  double operator()(double log_ratio) const { return eval_from_logratio(log_ratio); }
  // phi(x) for x > 0.
  double at(double x) const;
};

// phi_a(x) = 4 (1 - x^{(1+a)/2}) / (1 - a^2),  -1 < a < 1.
PhiFamily make_alpha_family(double a);

// phi_l(x) = (x^{l+1} - x - l (x - 1)) / (l (l + 1)),  l not in {0, -1}.
// Valid for |(l + 1) r| <= 700 on the log-ratio scale.
PhiFamily make_power_family(double l);

// phi(x) = -log x, the alpha -> -1 limit; C = -1, K = 1.
PhiFamily make_log_family();

// Arbitrary phi with phi(1) = 0 (checked to 1e-12). C and K are estimated by
// central differences at 1 with h = 1e-5; the case is inferred as K-only when
// |C| < 1e-6, C-only when |K| < 1e-6, C-and-K otherwise, unless overridden.
PhiFamily make_custom_family(std::function<double(double)> phi_eval, std::string name,
                             std::optional<PhiCase> case_override = std::nullopt);

// Central-difference estimates of phi'(1) and phi''(1) with step h.
struct PhiDerivatives {
  double first;
  double second;
};
PhiDerivatives phi_derivatives_at_one(const PhiFamily& family, double h = 1e-5);

// Parses "log", "alpha:A" or "power:L". Throws InvalidPhiError on malformed
// text and on parameters outside the family's domain.
PhiFamily parse_phi_spec(const std::string& spec);

}  // namespace phidiv
