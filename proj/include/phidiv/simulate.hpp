#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "phidiv/models.hpp"
#include "phidiv/rng.hpp"

namespace phidiv {

// Equally spaced observations X_{t_0}, ..., X_{t_n} with t_i = i * delta.
struct ObservedPath {
  double delta = 0.0;
  std::vector<double> x;
  std::string model_tag;

  std::size_t n() const { return x.empty() ? 0 : x.size() - 1; }
};

// Throws LengthError / InvalidParameterError when the path is not usable
// (fewer than two points, nonpositive step, non-finite values).
void validate_path(const ObservedPath& path);

// Lower floor applied to CIR draws and Euler steps near a state boundary.
inline constexpr double kStateFloor = 1e-12;

// Single exact transitions; used as the built-in models' exact samplers.
double vasicek_transition_draw(const ParamVector& theta, double x, double dt, Engine& engine);
double cir_transition_draw(const ParamVector& theta, double x, double dt, Engine& engine);

// Conditional moments of the exact transitions.
double vasicek_conditional_mean(const ParamVector& theta, double x, double dt);
double vasicek_conditional_variance(const ParamVector& theta, double dt);
double cir_conditional_mean(const ParamVector& theta, double x, double dt);
double cir_conditional_variance(const ParamVector& theta, double x, double dt);

ObservedPath simulate_vasicek_exact(const DiffusionModel& model, const ParamVector& theta0,
                                    double x0, std::size_t n, double delta, SeedSpec seed);

ObservedPath simulate_cir_exact(const DiffusionModel& model, const ParamVector& theta0,
                                double x0, std::size_t n, double delta, SeedSpec seed);

// Euler-Maruyama with internal step delta / substeps, recording every delta.
ObservedPath simulate_euler(const DiffusionModel& model, const ParamVector& theta0, double x0,
                            std::size_t n, double delta, std::size_t substeps, SeedSpec seed);

// Exact sampler when the model has one, Euler with 64 substeps otherwise.
ObservedPath simulate(const DiffusionModel& model, const ParamVector& theta0, double x0,
                      std::size_t n, double delta, SeedSpec seed);

// Last n_keep transitions (n_keep + 1 points) of a longer path.
ObservedPath burn_in_extract(const ObservedPath& full, std::size_t n_keep);

// Simulates burn_in_total transitions from x0 and keeps the last n_keep.
ObservedPath simulate_stationary(const DiffusionModel& model, const ParamVector& theta0,
                                 double x0, std::size_t n_keep, double delta,
                                 std::size_t burn_in_total, SeedSpec seed);

// CSV with header `t,x` and rows `t_i,x_i`, 17 significant digits.
void write_path_csv(std::ostream& out, const ObservedPath& path);

// Reads the format produced by write_path_csv. delta is recovered from the
// first two time stamps.
ObservedPath read_path_csv(std::istream& in);

}  // namespace phidiv
