#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "phidiv/models.hpp"

namespace phidiv {

struct NelderMeadOptions {
  std::size_t max_iterations = 20000;
  double x_tol = 1e-8;   // relative simplex diameter
  double f_tol = 1e-10;  // spread of objective values over the simplex
  double initial_step = 0.1;  // relative to |x0_i|, or to the box width when x0_i == 0
  bool record_trace = false;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<double> best_trace;  // best value after each iteration, when requested
};

using Objective = std::function<double(std::span<const double>)>;

// Minimises f over a box by the Nelder-Mead simplex method. Every trial point
// is projected onto the box before evaluation. Non-finite objective values
// are treated as +infinity.
NelderMeadResult nelder_mead_box(const Objective& f, std::vector<double> x0,
                                 std::span<const Interval> box,
                                 const NelderMeadOptions& options = {});

}  // namespace phidiv
