#include "numeric.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace superlase {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_or_inf(const std::function<double(double)>& f, double x) {
  try {
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
  } catch (const Error&) {
    return kInf;
  }
}

}  // namespace

ScalarMinimum grid_golden_minimize(const std::function<double(double)>& f, Interval range,
                                   int grid, double x_tol_rel) {
  if (!(range.lo < range.hi) || !std::isfinite(range.lo) || !std::isfinite(range.hi)) {
    throw SpecError("minimization interval must satisfy lo < hi");
  }
  if (grid < 3) throw SpecError("minimization grid needs at least 3 points");

  std::vector<double> xs(static_cast<std::size_t>(grid));
  std::vector<double> fs(xs.size());
  const double step = range.width() / (grid - 1);
  std::size_t best = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = i + 1 == xs.size() ? range.hi : range.lo + step * static_cast<double>(i);
    fs[i] = eval_or_inf(f, xs[i]);
    if (std::isfinite(fs[i]) && (best == xs.size() || fs[i] < fs[best])) best = i;
  }
  if (best == xs.size()) {
    throw NoMinimumError("objective is undefined at every grid point of the interval");
  }

  double a = xs[best == 0 ? 0 : best - 1];
  double b = xs[best + 1 == xs.size() ? best : best + 1];

  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval_or_inf(f, c);
  double fd = eval_or_inf(f, d);
  const double tol = x_tol_rel * std::max(std::abs(a), std::abs(b));
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval_or_inf(f, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval_or_inf(f, d);
    }
  }

  ScalarMinimum result;
  result.best_grid_x = xs[best];
  result.best_grid_value = fs[best];
  const double x_mid = 0.5 * (a + b);
  const double f_mid = eval_or_inf(f, x_mid);
  if (f_mid <= fs[best]) {
    result.x = x_mid;
    result.value = f_mid;
  } else {
    result.x = xs[best];
    result.value = fs[best];
  }
  return result;
}

Root find_first_root(const std::function<double(double)>& f, Interval range, double rel_tol,
                     int scan_points) {
  if (!(range.lo < range.hi)) throw SpecError("root bracket must satisfy lo < hi");
  scan_points = std::max(scan_points, 2);

  const double step = range.width() / (scan_points - 1);
  double a = range.lo;
  double fa = f(a);
  if (fa == 0.0) return {a, 0};

  bool found = false;
  double b = a;
  double fb = fa;
  for (int i = 1; i < scan_points; ++i) {
    b = i + 1 == scan_points ? range.hi : range.lo + step * i;
    fb = f(b);
    if (fb == 0.0) return {b, 0};
    if (std::signbit(fa) != std::signbit(fb)) {
      found = true;
      break;
    }
    a = b;
    fa = fb;
  }
  if (!found) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no sign change in [" << range.lo << ", " << range.hi << "]: f(lo) = " << f(range.lo)
        << ", f(hi) = " << fb;
    throw BracketError(msg.str(), range.lo, range.hi, f(range.lo), fb);
  }

  // Secant step when it lands well inside the bracket, bisection otherwise or
  // whenever the previous step failed to halve the bracket.
  int it = 0;
  double x = a;
  bool force_bisect = false;
  for (; it < 400; ++it) {
    const double width = b - a;
    double candidate = b - fb * (b - a) / (fb - fa);
    const double margin = 0.01 * width;
    if (force_bisect || !(candidate > a + margin && candidate < b - margin)) {
      candidate = 0.5 * (a + b);
    }
    const double fc = f(candidate);
    x = candidate;
    if (fc == 0.0) break;
    if (std::signbit(fc) == std::signbit(fa)) {
      a = candidate;
      fa = fc;
    } else {
      b = candidate;
      fb = fc;
    }
    force_bisect = (b - a) > 0.5 * width;
    if (b - a <= rel_tol * std::max(std::abs(a), std::abs(b))) {
      x = std::abs(fa) < std::abs(fb) ? a : b;
      break;
    }
  }
  return {x, it + 1};
}

}  // namespace superlase
