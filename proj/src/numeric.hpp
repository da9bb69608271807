#pragma once

#include <functional>

namespace superlase {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  double best_grid_x = 0.0;
  double best_grid_value = 0.0;
};

/// Grid scan over `range` with `grid` equally spaced points followed by
/// golden-section refinement inside the cell pair around the best grid point.
/// `f` may throw superlase::Error at points where it is undefined; those are
/// skipped. Throws NoMinimumError if no grid point evaluates, SpecError on an
/// empty interval or grid < 3.
ScalarMinimum grid_golden_minimize(const std::function<double(double)>& f, Interval range,
                                   int grid, double x_tol_rel = 1e-12);

struct Root {
  double x = 0.0;
  int iterations = 0;
};

/// Smallest root of `f` in `range`: a uniform scan locates the first sign
/// change, then a safeguarded secant/bisection hybrid refines it to
/// |dx| <= rel_tol * |x|. Throws BracketError when no sign change is found.
Root find_first_root(const std::function<double(double)>& f, Interval range, double rel_tol,
                     int scan_points = 64);

}  // namespace superlase
