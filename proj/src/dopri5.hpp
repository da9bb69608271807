#pragma once

// Dormand-Prince 5(4) embedded pair with FSAL, PI step-size control and the
// 4th-order continuous extension (Hairer, Norsett & Wanner, DOPRI5).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace superlase {

struct IntegratorStats {
  long long accepted = 0;
  long long rejected = 0;
  long long rhs_evals = 0;
};

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double h_min = 1e-18;
  double h_max = std::numeric_limits<double>::infinity();
  long long max_steps = 2'000'000'000LL;
};

template <std::size_t D, typename Rhs>
class Dopri5 {
 public:
  using Vec = std::array<double, D>;

  Dopri5(Rhs rhs, double t0, const Vec& y0, StepControl control)
      : rhs_(std::move(rhs)), control_(control), t_(t0), y_(y0) {
    rhs_(t_, y_, k1_);
    ++stats_.rhs_evals;
    check_finite(y_, t_);
    h_ = initial_step();
  }

  double time() const { return t_; }
  const Vec& state() const { return y_; }
  const IntegratorStats& stats() const { return stats_; }

  /// Integrates up to `t_target` (>= time()) and returns the interpolated state
  /// there. Steps may overshoot; the dense output covers the overshoot.
  Vec advance_to(double t_target) {
    if (t_target <= t_) {
      if (t_target >= t_old_ && have_dense_) return interpolate(t_target);
      return y_;
    }
    while (t_ < t_target) step();
    return interpolate(t_target);
  }

 private:
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                          a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  static void check_finite(const Vec& y, double t) {
    for (double v : y) {
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "non-finite state component at t = " << t << " s";
        throw DivergenceError(msg.str(), t);
      }
    }
  }

  double scale(double a, double b) const {
    return control_.abs_tol + control_.rel_tol * std::max(std::abs(a), std::abs(b));
  }

  double initial_step() {
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const double sk = scale(y_[i], y_[i]);
      d0 += (y_[i] / sk) * (y_[i] / sk);
      d1n += (k1_[i] / sk) * (k1_[i] / sk);
    }
    d0 = std::sqrt(d0 / D);
    d1n = std::sqrt(d1n / D);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, control_.h_max);

    Vec y1, f1;
    for (std::size_t i = 0; i < D; ++i) y1[i] = y_[i] + h0 * k1_[i];
    rhs_(t_ + h0, y1, f1);
    ++stats_.rhs_evals;
    double d2 = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const double sk = scale(y_[i], y_[i]);
      d2 += ((f1[i] - k1_[i]) / sk) * ((f1[i] - k1_[i]) / sk);
    }
    d2 = std::sqrt(d2 / D) / h0;
    const double dmax = std::max(d1n, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, control_.h_max});
  }

  void step() {
    for (;;) {
      if (stats_.accepted + stats_.rejected >= control_.max_steps) {
        throw StiffnessError("step budget exhausted", t_);
      }
      if (h_ < control_.h_min) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "step size " << h_ << " s fell below the floor " << control_.h_min
            << " s at t = " << t_ << " s";
        throw StiffnessError(msg.str(), t_);
      }
      const double h = h_;
      Vec tmp;
      for (std::size_t i = 0; i < D; ++i) tmp[i] = y_[i] + h * a21 * k1_[i];
      rhs_(t_ + c2 * h, tmp, k2_);
      for (std::size_t i = 0; i < D; ++i) tmp[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
      rhs_(t_ + c3 * h, tmp, k3_);
      for (std::size_t i = 0; i < D; ++i)
        tmp[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
      rhs_(t_ + c4 * h, tmp, k4_);
      for (std::size_t i = 0; i < D; ++i)
        tmp[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
      rhs_(t_ + c5 * h, tmp, k5_);
      for (std::size_t i = 0; i < D; ++i)
        tmp[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                              a65 * k5_[i]);
      rhs_(t_ + h, tmp, k6_);
      Vec y_new;
      for (std::size_t i = 0; i < D; ++i)
        y_new[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                                a76 * k6_[i]);
      rhs_(t_ + h, y_new, k7_);
      stats_.rhs_evals += 6;

      double err = 0.0;
      for (std::size_t i = 0; i < D; ++i) {
        const double ei = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                               e6 * k6_[i] + e7 * k7_[i]);
        const double r = ei / scale(y_[i], y_new[i]);
        err += r * r;
      }
      err = std::sqrt(err / D);

      if (!std::isfinite(err)) {
        ++stats_.rejected;
        h_ *= 0.1;
        continue;
      }

      constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0, beta = 0.04;
      constexpr double expo = 0.2 - beta * 0.75;
      if (err <= 1.0) {
        check_finite(y_new, t_ + h);
        const double log_err = std::log(std::max(err, 1e-10));
        double fac = safety * std::exp(beta * log_err_old_ - expo * log_err);
        fac = std::clamp(fac, fac_min, fac_max);
        if (last_rejected_) fac = std::min(fac, 1.0);
        log_err_old_ = std::log(std::max(err, 1e-4));

        for (std::size_t i = 0; i < D; ++i) {
          const double ydiff = y_new[i] - y_[i];
          const double bspl = h * k1_[i] - ydiff;
          r1_[i] = y_[i];
          r2_[i] = ydiff;
          r3_[i] = bspl;
          r4_[i] = ydiff - h * k7_[i] - bspl;
          r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                        d7 * k7_[i]);
        }
        have_dense_ = true;
        t_old_ = t_;
        h_old_ = h;
        t_ += h;
        y_ = y_new;
        k1_ = k7_;
        ++stats_.accepted;
        last_rejected_ = false;
        h_ = std::min(h * fac, control_.h_max);
        return;
      }
      ++stats_.rejected;
      last_rejected_ = true;
      h_ = h * std::max(fac_min, safety * std::pow(err, -0.2));
    }
  }

  Vec interpolate(double t) const {
    const double theta = (t - t_old_) / h_old_;
    const double theta1 = 1.0 - theta;
    Vec out;
    for (std::size_t i = 0; i < D; ++i) {
      out[i] = r1_[i] + theta * (r2_[i] + theta1 * (r3_[i] + theta * (r4_[i] + theta1 * r5_[i])));
    }
    return out;
  }

  Rhs rhs_;
  StepControl control_;
  double t_;
  double h_ = 0.0;
  double t_old_ = 0.0;
  double h_old_ = 1.0;
  double log_err_old_ = std::log(1e-4);
  bool last_rejected_ = false;
  bool have_dense_ = false;
  Vec y_;
  Vec k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{};
  Vec r1_{}, r2_{}, r3_{}, r4_{}, r5_{};
  IntegratorStats stats_;
};

}  // namespace superlase
