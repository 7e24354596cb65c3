#pragma once

#include <cstddef>
#include <functional>

namespace phidiv {

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  std::size_t max_subdivisions = 2000;
};

using Integrand = std::function<double(double)>;

// Globally adaptive Simpson rule with Richardson correction. The panel with
// the largest error estimate is bisected until the summed estimate drops
// below max(abs_tol, rel_tol * |I|). Throws NumericalIntegrationError when the
// subdivision budget runs out or the integrand returns a non-finite value.
// b < a yields the signed (negated) integral.
double integrate(const Integrand& f, double a, double b, const QuadratureSettings& settings = {});

// int_a^inf f(x) dx through x = a + t / (1 - t).
double integrate_to_infinity(const Integrand& f, double a,
                             const QuadratureSettings& settings = {});

}  // namespace phidiv
