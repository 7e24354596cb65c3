#include "phidiv/phi_family.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "phidiv/errors.hpp"

namespace phidiv {

const char* to_string(PhiCase c) {
  switch (c) {
    case PhiCase::c_only:
      return "C-only";
    case PhiCase::k_only:
      return "K-only";
    case PhiCase::c_and_k:
      return "C-and-K";
  }
  return "?";
}

double PhiFamily::at(double x) const { return eval_from_logratio(std::log(x)); }

PhiFamily make_alpha_family(double a) {
  if (!(a > -1.0 && a < 1.0)) {
    std::ostringstream msg;
    msg << "alpha-divergence parameter must lie in (-1, 1), got " << a
        << " (use the log family for the alpha -> -1 limit)";
    throw InvalidPhiError(msg.str());
  }
  PhiFamily f;
  std::ostringstream name;
  name << "alpha:" << a;
  f.name = name.str();
  f.kind = PhiKind::alpha;
  f.param = a;
  const double exponent = 0.5 * (1.0 + a);
  const double scale = 4.0 / (1.0 - a * a);
  f.eval_from_logratio = [exponent, scale](double r) { return -scale * std::expm1(exponent * r); };
  f.C_phi = 2.0 / (a - 1.0);
  f.K_phi = 1.0;
  f.case_tag = PhiCase::c_and_k;
  return f;
}

PhiFamily make_power_family(double l) {
  if (l == 0.0 || l == -1.0 || !std::isfinite(l)) {
    std::ostringstream msg;
    msg << "power-divergence parameter must be finite and not 0 or -1, got " << l;
    throw InvalidPhiError(msg.str());
  }
  PhiFamily f;
  std::ostringstream name;
  name << "power:" << l;
  f.name = name.str();
  f.kind = PhiKind::power;
  f.param = l;
  const double denom = l * (l + 1.0);
  // x^{l+1} - x - l(x-1) = expm1((l+1) r) - (l+1) expm1(r) with x = e^r.
  f.eval_from_logratio = [l, denom](double r) {
    return (std::expm1((l + 1.0) * r) - (l + 1.0) * std::expm1(r)) / denom;
  };
  f.C_phi = 0.0;
  f.K_phi = 1.0;
  f.case_tag = PhiCase::k_only;
  return f;
}

PhiFamily make_log_family() {
  PhiFamily f;
  f.name = "log";
  f.kind = PhiKind::log;
  f.eval_from_logratio = [](double r) { return -r; };
  f.C_phi = -1.0;
  f.K_phi = 1.0;
  f.case_tag = PhiCase::c_and_k;
  return f;
}

PhiDerivatives phi_derivatives_at_one(const PhiFamily& family, double h) {
  const double up = family.at(1.0 + h);
  const double mid = family.at(1.0);
  const double down = family.at(1.0 - h);
  return {(up - down) / (2.0 * h), (up - 2.0 * mid + down) / (h * h)};
}

PhiFamily make_custom_family(std::function<double(double)> phi_eval, std::string name,
                             std::optional<PhiCase> case_override) {
  if (!phi_eval) throw InvalidPhiError("custom phi needs an evaluator");
  const double at_one = phi_eval(1.0);
  if (!(std::abs(at_one) <= 1e-12)) {
    std::ostringstream msg;
    msg << "custom phi must satisfy phi(1) = 0, got " << at_one;
    throw InvalidPhiError(msg.str());
  }
  PhiFamily f;
  f.name = std::move(name);
  f.kind = PhiKind::custom;
  f.eval_from_logratio = [phi = std::move(phi_eval)](double r) { return phi(std::exp(r)); };
  const PhiDerivatives d = phi_derivatives_at_one(f);
  f.C_phi = d.first;
  f.K_phi = d.second;
  if (case_override) {
    f.case_tag = *case_override;
  } else if (std::abs(f.C_phi) < 1e-4) {
    f.case_tag = PhiCase::k_only;
  } else if (std::abs(f.K_phi) < 1e-4) {
    f.case_tag = PhiCase::c_only;
  } else {
    f.case_tag = PhiCase::c_and_k;
  }
  return f;
}

PhiFamily parse_phi_spec(const std::string& spec) {
  if (spec == "log") return make_log_family();
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw InvalidPhiError("phi spec must be 'log', 'alpha:A' or 'power:L', got '" + spec + "'");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string value = spec.substr(colon + 1);
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::logic_error&) {
    throw InvalidPhiError("malformed phi parameter '" + value + "'");
  }
  if (kind == "alpha") return make_alpha_family(v);
  if (kind == "power") return make_power_family(v);
  throw InvalidPhiError("unknown phi family '" + kind + "'");
}

}  // namespace phidiv
