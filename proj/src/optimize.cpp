#include "phidiv/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "phidiv/errors.hpp"

namespace phidiv {
namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

}  // namespace

NelderMeadResult nelder_mead_box(const Objective& f, std::vector<double> x0,
                                 std::span<const Interval> box,
                                 const NelderMeadOptions& options) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw InvalidParameterError("cannot optimise over zero parameters");
  if (box.size() != dim) throw InvalidParameterError("box dimension does not match start");

  NelderMeadResult result;
  auto project = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < dim; ++i) x[i] = box[i].clamp(x[i]);
  };
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  project(x0);
  std::vector<Vertex> simplex;
  auto build = [&](const std::vector<double>& start, double start_f) {
    simplex.clear();
    simplex.push_back({start, start_f});
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<double> x = start;
      double step = options.initial_step * std::abs(start[i]);
      if (step == 0.0) {
        const double width = box[i].upper - box[i].lower;
        step = std::isfinite(width) ? options.initial_step * 0.5 * width : options.initial_step;
      }
      x[i] = start[i] + step;
      if (x[i] > box[i].upper) x[i] = start[i] - step;
      project(x);
      simplex.push_back({x, eval(x)});
    }
  };
  build(x0, eval(x0));

  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::vector<double> centroid(dim);
  auto along = [&](double t, const std::vector<double>& worst) {
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = centroid[i] + t * (centroid[i] - worst[i]);
    project(x);
    return x;
  };

  constexpr int kMaxRestarts = 20;
  int restarts_left = kMaxRestarts;
  double last_restart_f = std::numeric_limits<double>::infinity();
  for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    const Vertex& best = simplex.front();

    double diameter = 0.0;
    for (std::size_t v = 1; v <= dim; ++v) {
      for (std::size_t i = 0; i < dim; ++i) {
        const double scale = std::max(std::abs(best.x[i]), 1e-8);
        diameter = std::max(diameter, std::abs(simplex[v].x[i] - best.x[i]) / scale);
      }
    }
    const double spread = simplex.back().f - best.f;
    if (std::isfinite(best.f) && (diameter < options.x_tol || spread < options.f_tol)) {
      // A simplex flattened against a box face can stall; restart around the
      // best point and stop only once a fresh simplex no longer improves it.
      if (restarts_left > 0 && best.f < last_restart_f - options.f_tol) {
        --restarts_left;
        last_restart_f = best.f;
        const Vertex keep = best;
        build(keep.x, keep.f);
        continue;
      }
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < dim; ++v) {
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    Vertex& worst = simplex.back();
    const double second_worst = simplex[dim - 1].f;

    std::vector<double> xr = along(kReflect, worst.x);
    const double fr = eval(xr);
    if (fr < best.f) {
      std::vector<double> xe = along(kExpand, worst.x);
      const double fe = eval(xe);
      if (fe < fr) {
        worst = {std::move(xe), fe};
      } else {
        worst = {std::move(xr), fr};
      }
    } else if (fr < second_worst) {
      worst = {std::move(xr), fr};
    } else {
      const bool outside = fr < worst.f;
      std::vector<double> xc = along(outside ? kContract : -kContract, worst.x);
      const double fc = eval(xc);
      if (fc < (outside ? fr : worst.f)) {
        worst = {std::move(xc), fc};
      } else {
        const std::vector<double> anchor = simplex.front().x;
        for (std::size_t v = 1; v <= dim; ++v) {
          for (std::size_t i = 0; i < dim; ++i) {
            simplex[v].x[i] = anchor[i] + kShrink * (simplex[v].x[i] - anchor[i]);
          }
          project(simplex[v].x);
          simplex[v].f = eval(simplex[v].x);
        }
      }
    }
    if (options.record_trace) {
      const auto it = std::min_element(simplex.begin(), simplex.end(), by_value);
      result.best_trace.push_back(it->f);
    }
  }

  std::sort(simplex.begin(), simplex.end(), by_value);
  result.x = simplex.front().x;
  result.value = simplex.front().f;
  return result;
}

}  // namespace phidiv
