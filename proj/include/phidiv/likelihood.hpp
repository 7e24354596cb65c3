#pragma once

#include "phidiv/models.hpp"
#include "phidiv/quadrature.hpp"
#include "phidiv/simulate.hpp"

namespace phidiv {

// Auxiliary functions of the Dacunha-Castelle / Florens-Zmirou transition
// density approximation. Closed forms from the model are used when present,
// adaptive quadrature otherwise.

// int_x^y du / sigma(beta, u)
double S_fun(const DiffusionModel& model, const ParamVector& theta, double x, double y,
             const QuadratureSettings& settings = {});

// int_x^y { b / sigma^2 - sigma' / (2 sigma) } du
double H_fun(const DiffusionModel& model, const ParamVector& theta, double x, double y,
             const QuadratureSettings& settings = {});

// b / sigma - sigma' / 2
double B_fun(const DiffusionModel& model, const ParamVector& theta, double x);

// dB/dx: the model's closed form if it has one, central difference otherwise.
double B_dx(const DiffusionModel& model, const ParamVector& theta, double x);

// Central difference with h = max(1e-6, 1e-6 |x|), regardless of closed forms.
double B_dx_numeric(const DiffusionModel& model, const ParamVector& theta, double x);

// B^2 / 3 + B' sigma / 2
double C_fun(const DiffusionModel& model, const ParamVector& theta, double x);

// -(C(x) + C(y) + B(x) B(y) / 3) / 2
double g_tilde(const DiffusionModel& model, const ParamVector& theta, double x, double y);

// log f(x, y, t) = -log(2 pi t)/2 - log sigma(y) - S^2 / (2t) + H + t g~
//
// x is the earlier observation, y the later one, matching the ordering of the
// log-likelihood sum. Throws DomainError when sigma(y) <= 0 or t <= 0.
double dcfz_log_transition(const DiffusionModel& model, const ParamVector& theta, double x,
                           double y, double t, const QuadratureSettings& settings = {});

// Sum of dcfz_log_transition over consecutive pairs with t = path.delta.
double dcfz_loglik(const DiffusionModel& model, const ParamVector& theta,
                   const ObservedPath& path, const QuadratureSettings& settings = {});

// Euler one-step Gaussian: log N(y; x + t b(x), t sigma^2(x)).
double local_gauss_log(const DiffusionModel& model, const ParamVector& theta, double x, double y,
                       double t);

double local_gauss_loglik(const DiffusionModel& model, const ParamVector& theta,
                          const ObservedPath& path);

}  // namespace phidiv
