#include "dynamics.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <random>

#include "errors.hpp"
#include "format.hpp"

namespace superlase {

namespace {

using DickeVec = std::array<double, 7>;
using SupermodeVec = std::array<double, 9>;

DickeVec flatten(const DickeState& s) {
  return {s.a1.real(), s.a1.imag(), s.a2.real(), s.a2.imag(),
          s.j_minus.real(), s.j_minus.imag(), s.j_z};
}

DickeState unflatten_dicke(const DickeVec& y) {
  return {{y[0], y[1]}, {y[2], y[3]}, {y[4], y[5]}, y[6]};
}

SupermodeVec flatten(const SupermodeState& s) {
  return {s.a_plus.real(), s.a_plus.imag(), s.a_minus.real(), s.a_minus.imag(),
          s.j_minus.real(), s.j_minus.imag(), s.j_z, s.b.real(), s.b.imag()};
}

SupermodeState unflatten_supermode(const SupermodeVec& y) {
  return {{y[0], y[1]}, {y[2], y[3]}, {y[4], y[5]}, y[6], {y[7], y[8]}};
}

void validate_tolerances(double rel_tol, double abs_tol) {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw SpecError("rel_tol must lie in (0, 1e-2]");
  if (!(abs_tol > 0.0 && abs_tol <= 1e-2)) throw SpecError("abs_tol must lie in (0, 1e-2]");
}

}  // namespace

Picture picture_of(const SystemState& s) {
  return std::holds_alternative<DickeState>(s) ? Picture::Dicke : Picture::Supermode;
}

namespace {

// Real-arithmetic forms of the two right-hand sides over the flattened state.
// Layouts: [Re a1, Im a1, Re a2, Im a2, Re J-, Im J-, Jz] and
// [Re a+, Im a+, Re a-, Im a-, Re J-, Im J-, Jz, Re b, Im b].
struct DickeRhs {
  double gamma, dc, dp, g, coupling, wr;

  DickeRhs(const DerivedParams& p, double lambda)
      : gamma(p.raw.cavity_loss),
        dc(p.raw.pump_cavity_detuning),
        dp(p.detuning_prime),
        g(p.raw.cavity_coupling),
        coupling(lambda / std::sqrt(p.raw.n_atoms)),
        wr(p.recoil_freq) {}

  void operator()(double, const DickeVec& y, DickeVec& d) const {
    const double quad = 2.0 * y[2];  // a2^* + a2
    d[0] = -gamma * y[0] - dc * y[1] + g * y[3];
    d[1] = dc * y[0] - gamma * y[1] - g * y[2];
    d[2] = -gamma * y[2] - dp * y[3] + g * y[1];
    d[3] = dp * y[2] - gamma * y[3] - g * y[0] - 2.0 * coupling * y[4];
    d[4] = wr * y[5];
    d[5] = -wr * y[4] + 2.0 * coupling * y[6] * quad;
    d[6] = -2.0 * coupling * y[5] * quad;
  }
};

struct SupermodeRhs {
  double gamma, quarter_shift, chi, omega_plus, omega_minus, coupling, wr, wm, gm;

  SupermodeRhs(const DerivedParams& p, double lambda)
      : gamma(p.raw.cavity_loss),
        quarter_shift(p.raw.collective_stark_NU0 / 4.0),
        chi(p.raw.com_coupling),
        omega_plus(p.omega_plus),
        omega_minus(p.omega_minus),
        coupling(lambda / std::sqrt(2.0 * p.raw.n_atoms)),
        wr(p.recoil_freq),
        wm(p.raw.mech_freq),
        gm(p.raw.mech_damping) {}

  void operator()(double, const SupermodeVec& y, SupermodeVec& d) const {
    const double pr = y[0], pi = y[1], mr = y[2], mi = y[3];
    const double jr = y[4], ji = y[5], jz = y[6], br = y[7], bi = y[8];
    // (NU0 + 2 chi b)/4 = kr + i ki; the a- equation uses its b -> b^* partner.
    const double kr = quarter_shift + 0.5 * chi * br;
    const double ki = 0.5 * chi * bi;
    const double quad = 2.0 * (pr - mr);  // a+^* + a+ - a-^* - a-
    const double drive = 2.0 * coupling * jr;
    d[0] = -(kr * mi + ki * mr) - gamma * pr + omega_plus * pi;
    d[1] = (kr * mr - ki * mi) - omega_plus * pr - gamma * pi - drive;
    d[2] = -(kr * pi - ki * pr) - gamma * mr + omega_minus * mi;
    d[3] = (kr * pr + ki * pi) - omega_minus * mr - gamma * mi + drive;
    d[4] = wr * ji;
    d[5] = -wr * jr + 2.0 * coupling * quad * jz;
    d[6] = -2.0 * coupling * quad * ji;
    // a-^* a+
    const double sr = mr * pr + mi * pi;
    const double si = mr * pi - mi * pr;
    d[7] = -gm * br + wm * bi - 0.5 * chi * si;
    d[8] = -wm * br - gm * bi + 0.5 * chi * sr;
  }
};

}  // namespace

DickeState rhs_dicke(const DickeState& s, const DerivedParams& p, double lambda) {
  DickeVec d;
  DickeRhs(p, lambda)(0.0, flatten(s), d);
  return unflatten_dicke(d);
}

SupermodeState rhs_supermode(const SupermodeState& s, const DerivedParams& p, double lambda) {
  SupermodeVec d;
  SupermodeRhs(p, lambda)(0.0, flatten(s), d);
  return unflatten_supermode(d);
}

SupermodeState to_supermode(const DickeState& s, cplx b) {
  const double r = 1.0 / std::sqrt(2.0);
  return {(s.a1 + s.a2) * r, (s.a1 - s.a2) * r, s.j_minus, s.j_z, b};
}

DickeState to_dicke(const SupermodeState& s) {
  const double r = 1.0 / std::sqrt(2.0);
  return {(s.a_plus + s.a_minus) * r, (s.a_plus - s.a_minus) * r, s.j_minus, s.j_z};
}

namespace {

std::vector<double> sample_grid(double t_end, const IntegrateOptions& options) {
  std::vector<double> times;
  if (!options.sample_times.empty()) {
    double prev = 0.0;
    for (double t : options.sample_times) {
      if (!(t > prev) || t > t_end) {
        throw SpecError("sample times must be strictly increasing within (0, t_end]");
      }
      times.push_back(t);
      prev = t;
    }
    return times;
  }
  const int n = std::max(options.samples, 2);
  for (int i = 1; i < n; ++i) {
    times.push_back(i + 1 == n ? t_end : t_end * static_cast<double>(i) / (n - 1));
  }
  return times;
}

template <typename State, typename Rhs>
Trajectory run(const State& s0, double t_end, const IntegrateOptions& options, Picture picture,
               const Rhs& flat_rhs) {
  StepControl control;
  control.rel_tol = options.rel_tol;
  control.abs_tol = options.abs_tol;
  control.h_min = options.h_min;

  const auto y0 = flatten(s0);
  Dopri5<std::tuple_size_v<decltype(y0)>, Rhs> solver(flat_rhs, 0.0, y0, control);

  Trajectory traj;
  traj.picture = picture;
  traj.times.push_back(0.0);
  traj.states.emplace_back(s0);
  for (double t : sample_grid(t_end, options)) {
    const auto y = solver.advance_to(t);
    traj.times.push_back(t);
    if constexpr (std::is_same_v<State, DickeState>) {
      traj.states.emplace_back(unflatten_dicke(y));
    } else {
      traj.states.emplace_back(unflatten_supermode(y));
    }
  }
  traj.stats = solver.stats();
  return traj;
}

}  // namespace

Trajectory integrate(const SystemState& s0, const DerivedParams& p, double lambda, double t_end,
                     const IntegrateOptions& options) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw SpecError("t_end must be > 0");
  validate_tolerances(options.rel_tol, options.abs_tol);

  if (const auto* d = std::get_if<DickeState>(&s0)) {
    return run(*d, t_end, options, Picture::Dicke, DickeRhs(p, lambda));
  }
  return run(std::get<SupermodeState>(s0), t_end, options, Picture::Supermode,
             SupermodeRhs(p, lambda));
}

double spin_length_squared(const SystemState& s) {
  return std::visit([](const auto& st) { return std::norm(st.j_minus) + st.j_z * st.j_z; }, s);
}

double conservation_drift(const Trajectory& traj) {
  if (traj.states.empty()) return 0.0;
  const double l0 = spin_length_squared(traj.states.front());
  double drift = 0.0;
  for (const auto& s : traj.states) {
    drift = std::max(drift, std::abs(spin_length_squared(s) - l0) / l0);
  }
  return drift;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const bool with_b = traj.picture == Picture::Supermode;
  out << "t,re_a1,im_a1,re_a2,im_a2,re_Jm,im_Jm,Jz";
  if (with_b) out << ",re_b,im_b";
  out << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << format_double(traj.times[i]);
    std::visit([&out](const auto& st) {
      for (double v : flatten(st)) out << ',' << format_double(v);
    }, traj.states[i]);
    out << '\n';
  }
}

DickeState perturb(const DickeState& s, double epsilon, double n_atoms) {
  const double k = 1.0 + epsilon;
  DickeState out{s.a1 * k, s.a2 * k, s.j_minus * k, s.j_z * k};
  const double half_n = 0.5 * n_atoms;
  const double jm = std::abs(out.j_minus);
  if (jm > half_n) {
    out.j_minus *= half_n / jm;
    out.j_z = 0.0;
  } else {
    const double jz = std::sqrt((half_n - jm) * (half_n + jm));
    out.j_z = std::copysign(jz, s.j_z);
  }
  return out;
}

DickeState to_dicke_state(const SteadyState& s) { return {s.a1, s.a2, s.j_minus, s.j_z}; }

RelaxResult relax_to_steady(const DerivedParams& p, double lambda, double perturbation,
                            double t_max, const RelaxOptions& options) {
  if (!(t_max > 0.0)) throw SpecError("t_max must be > 0");
  validate_tolerances(options.rel_tol, options.abs_tol);

  RelaxResult result;
  result.analytic = steady_state(p, lambda);
  if (result.analytic.phase == Phase::Critical) {
    throw DomainError("relaxation is undefined exactly at the critical coupling");
  }

  const double half_n = 0.5 * p.raw.n_atoms;
  const DickeState target = to_dicke_state(result.analytic);
  const DickeState start = perturb(target, perturbation, p.raw.n_atoms);
  const auto y_start = flatten(start);

  // Per-component scale: analytic magnitude, or the kick when the target is zero.
  const std::array<double, 4> magnitude{std::abs(target.a1), std::abs(target.a2),
                                        std::abs(target.j_minus), std::abs(target.j_z)};
  const std::array<double, 4> kick{std::abs(start.a1 - target.a1), std::abs(start.a2 - target.a2),
                                   std::abs(start.j_minus - target.j_minus),
                                   std::abs(start.j_z - target.j_z)};
  std::array<double, 7> scale{};
  const std::array<int, 7> group{0, 0, 1, 1, 2, 2, 3};
  for (std::size_t i = 0; i < scale.size(); ++i) {
    const auto gi = static_cast<std::size_t>(group[i]);
    scale[i] = std::max({magnitude[gi], kick[gi], std::numeric_limits<double>::min()});
  }

  StepControl control;
  control.rel_tol = options.rel_tol;
  control.abs_tol = options.abs_tol;
  Dopri5<7, DickeRhs> solver(DickeRhs(p, lambda), 0.0, y_start, control);

  const double window = options.window_cavity_lifetimes / p.raw.cavity_loss;
  const double l0 = std::norm(start.j_minus) + start.j_z * start.j_z;
  DickeVec prev = y_start;
  DickeVec y = y_start;
  double drift = 0.0;
  double change = std::numeric_limits<double>::infinity();
  long long k = 0;
  while (true) {
    ++k;
    const double t = window * static_cast<double>(k);
    y = solver.advance_to(t);
    change = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      change = std::max(change, std::abs(y[i] - prev[i]) / scale[i]);
    }
    const double l = y[4] * y[4] + y[5] * y[5] + y[6] * y[6];
    drift = std::max(drift, std::abs(l - l0) / l0);
    prev = y;
    result.t_final = t;
    if (change < options.threshold) {
      result.converged = true;
      break;
    }
    if (t >= t_max) break;
  }

  const DickeState final_state = unflatten_dicke(y);
  result.state.a1 = final_state.a1;
  result.state.a2 = final_state.a2;
  result.state.j_minus = final_state.j_minus;
  result.state.j_z = final_state.j_z;
  result.state.photons_cavity2 = std::norm(final_state.a2);
  result.state.phase = result.analytic.phase;
  result.final_change = change;
  result.conservation_drift = drift;
  result.windows = k;
  result.stats = solver.stats();

  if (result.analytic.phase == Phase::Superradiant) {
    result.residual = std::max({std::abs(final_state.a1 - target.a1) / magnitude[0],
                                std::abs(final_state.a2 - target.a2) / magnitude[1],
                                std::abs(final_state.j_minus - target.j_minus) / magnitude[2],
                                std::abs(final_state.j_z - target.j_z) / magnitude[3]});
  } else {
    // Fields in photon-amplitude units, spin relative to N/2.
    result.residual = std::max({std::abs(final_state.a1), std::abs(final_state.a2),
                                std::abs(final_state.j_minus) / half_n,
                                std::abs(final_state.j_z - target.j_z) / half_n});
  }
  return result;
}

DickeState seeded_normal_state(const DerivedParams& p, double amplitude, double spin_tilt,
                               unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double half_n = 0.5 * p.raw.n_atoms;
  DickeState s;
  s.a1 = amplitude * cplx(unit(rng), unit(rng));
  s.a2 = amplitude * cplx(unit(rng), unit(rng));
  s.j_minus = spin_tilt * half_n * cplx(unit(rng), unit(rng));
  const double jm = std::min(std::abs(s.j_minus), half_n);
  s.j_z = std::copysign(std::sqrt((half_n - jm) * (half_n + jm)), transition_discriminant(p));
  return s;
}

DecayResult field_decay_run(const DerivedParams& p, double lambda, const DickeState& s0,
                            double t_max, const DecayOptions& options) {
  if (!(t_max > 0.0)) throw SpecError("t_max must be > 0");
  validate_tolerances(options.rel_tol, options.abs_tol);

  StepControl control;
  control.rel_tol = options.rel_tol;
  control.abs_tol = options.abs_tol;
  Dopri5<7, DickeRhs> solver(DickeRhs(p, lambda), 0.0, flatten(s0), control);

  const auto field = [](const DickeVec& y) {
    return std::max(std::hypot(y[0], y[1]), std::hypot(y[2], y[3]));
  };

  DecayResult result;
  result.initial_field = field(flatten(s0));
  const double limit = options.factor * result.initial_field;
  const double span = 4.0 * constants::pi / p.recoil_freq;
  const double window = options.window_cavity_lifetimes / p.raw.cavity_loss;
  const double l0 = std::norm(s0.j_minus) + s0.j_z * s0.j_z;

  double last_above = 0.0;
  double below_max = 0.0;  // largest amplitude since the last excursion above the limit
  for (long long k = 1;; ++k) {
    const double t = window * static_cast<double>(k);
    const auto y = solver.advance_to(t);
    const double f = field(y);
    const double l = y[4] * y[4] + y[5] * y[5] + y[6] * y[6];
    result.conservation_drift = std::max(result.conservation_drift, std::abs(l - l0) / l0);
    result.t_final = t;
    result.final_field = f;
    if (f >= limit) {
      last_above = t;
      below_max = 0.0;
    } else {
      below_max = std::max(below_max, f);
      if (t - last_above >= span) {
        result.decayed = true;
        result.final_field = below_max;
        break;
      }
    }
    if (t >= t_max) break;
  }
  result.stats = solver.stats();
  return result;
}

}  // namespace superlase
