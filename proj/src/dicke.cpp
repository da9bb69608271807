#include "dicke.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace superlase {

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Normal:
      return "normal";
    case Phase::Critical:
      return "critical";
    case Phase::Superradiant:
      return "superradiant";
  }
  return "unknown";
}

double transition_discriminant(const DerivedParams& p) {
  return p.raw.cavity_loss * p.v_coef - p.raw.pump_cavity_detuning * p.u_coef;
}

double critical_coupling(const DerivedParams& p) {
  const double gv = p.raw.cavity_loss * p.v_coef;
  const double du = p.raw.pump_cavity_detuning * p.u_coef;
  const double denom = std::abs(gv - du);
  // Below this the difference is pure rounding noise.
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(gv) + std::abs(du));
  if (!(denom > noise)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "critical coupling diverges: gamma*v == Delta_c*u at Delta_c = "
        << p.raw.pump_cavity_detuning << " rad/s";
    throw SingularPointError(msg.str(), p.raw.pump_cavity_detuning);
  }
  const double uv2 = p.u_coef * p.u_coef + p.v_coef * p.v_coef;
  return 0.5 * std::sqrt(p.recoil_freq * uv2 / denom);
}

SteadyState steady_state(const DerivedParams& p, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("pump coupling lambda must be finite and >= 0");
  }
  const double lambda_c = critical_coupling(p);
  const double n = p.raw.n_atoms;
  const double disc = transition_discriminant(p);

  SteadyState s;
  if (lambda <= lambda_c) {
    s.phase = lambda == lambda_c ? Phase::Critical : Phase::Normal;
    s.j_z = std::copysign(0.5 * n, disc);
    return s;
  }

  const double gamma = p.raw.cavity_loss;
  const double dc = p.raw.pump_cavity_detuning;
  const double g = p.raw.cavity_coupling;
  const double uv2 = p.u_coef * p.u_coef + p.v_coef * p.v_coef;

  s.phase = Phase::Superradiant;
  s.j_z = n * p.recoil_freq * uv2 / (8.0 * lambda * lambda * disc);
  const double half_n = 0.5 * n;
  // N^2/4 - J_z^2 factored to keep precision near the transition.
  const double jm2 = (half_n - s.j_z) * (half_n + s.j_z);
  s.j_minus = cplx(std::sqrt(std::max(jm2, 0.0)), 0.0);
  s.a2 = -2.0 * lambda * cplx(dc, gamma) * s.j_minus / (std::sqrt(n) * cplx(p.u_coef, -p.v_coef));
  s.a1 = -cplx(0.0, g) * s.a2 / cplx(gamma, -dc);
  s.photons_cavity2 = std::norm(s.a2);
  return s;
}

double intracavity_photons(const DerivedParams& p, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("pump coupling lambda must be finite and >= 0");
  }
  const double lambda_c = critical_coupling(p);
  if (lambda <= lambda_c) return 0.0;
  const double gamma = p.raw.cavity_loss;
  const double dc = p.raw.pump_cavity_detuning;
  const double uv2 = p.u_coef * p.u_coef + p.v_coef * p.v_coef;
  const double ratio = lambda_c / lambda;
  const double ratio2 = ratio * ratio;
  return p.raw.n_atoms * lambda * lambda * (dc * dc + gamma * gamma) / uv2 *
         ((1.0 - ratio2) * (1.0 + ratio2));
}

CriticalMinimum minimize_critical_coupling(const DerivedParams& p, Interval detuning_range,
                                           int grid) {
  const auto objective = [&p](double detuning) {
    return critical_coupling(with_detuning(p, detuning));
  };
  const ScalarMinimum m = grid_golden_minimize(objective, detuning_range, grid);
  return {m.x, m.value, m.best_grid_x, m.best_grid_value};
}

}  // namespace superlase
