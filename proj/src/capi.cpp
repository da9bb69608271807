#include "superlase/superlase.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "config.hpp"
#include "dicke.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "gain.hpp"
#include "sweep.hpp"

struct sl_params {
  superlase::DerivedParams value;
};

struct sl_sweep {
  std::vector<superlase::SweepRow> rows;
};

struct sl_trajectory {
  superlase::Trajectory value;
};

namespace {

using namespace superlase;

thread_local std::string g_last_error;

sl_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain:
      return SL_ERR_DOMAIN;
    case ErrorCode::Config:
      return SL_ERR_CONFIG;
    case ErrorCode::Spec:
      return SL_ERR_SPEC;
    case ErrorCode::Singular:
      return SL_ERR_SINGULAR;
    case ErrorCode::NoMinimum:
      return SL_ERR_NO_MINIMUM;
    case ErrorCode::Bracket:
      return SL_ERR_BRACKET;
    case ErrorCode::Stiffness:
      return SL_ERR_STIFF;
    case ErrorCode::Divergence:
      return SL_ERR_DIVERGED;
    case ErrorCode::Io:
      return SL_ERR_IO;
  }
  return SL_ERR_INTERNAL;
}

template <typename Fn>
sl_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return SL_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SL_ERR_INTERNAL;
  }
}

sl_status invalid(const char* what) {
  g_last_error = what;
  return SL_ERR_INVALID_ARGUMENT;
}

RawParams from_c(const sl_raw_params& r) {
  RawParams raw;
  raw.n_atoms = r.n_atoms;
  raw.pump_wavelength = r.pump_wavelength;
  raw.cavity_loss = r.cavity_loss;
  raw.mech_freq = r.mech_freq;
  raw.mech_damping = r.mech_damping;
  raw.atom_photon_g0 = r.atom_photon_g0;
  raw.collective_stark_NU0 = r.collective_stark_NU0;
  raw.com_coupling = r.com_coupling;
  raw.cavity_coupling = r.cavity_coupling;
  raw.pump_cavity_detuning = r.pump_cavity_detuning;
  raw.atom_mass = r.atom_mass;
  raw.dipole_moment = r.dipole_moment;
  raw.beam_waist = r.beam_waist;
  return raw;
}

sl_raw_params to_c(const RawParams& raw) {
  return {raw.n_atoms,          raw.pump_wavelength,      raw.cavity_loss,
          raw.mech_freq,        raw.mech_damping,         raw.atom_photon_g0,
          raw.collective_stark_NU0, raw.com_coupling,     raw.cavity_coupling,
          raw.pump_cavity_detuning, raw.atom_mass,        raw.dipole_moment,
          raw.beam_waist};
}

sl_phase to_c(Phase phase) {
  switch (phase) {
    case Phase::Normal:
      return SL_PHASE_NORMAL;
    case Phase::Critical:
      return SL_PHASE_CRITICAL;
    case Phase::Superradiant:
      return SL_PHASE_SUPERRADIANT;
  }
  return SL_PHASE_NORMAL;
}

Phase from_c(sl_phase phase) {
  switch (phase) {
    case SL_PHASE_CRITICAL:
      return Phase::Critical;
    case SL_PHASE_SUPERRADIANT:
      return Phase::Superradiant;
    default:
      return Phase::Normal;
  }
}

sl_steady_state to_c(const SteadyState& s) {
  return {s.a1.real(), s.a1.imag(), s.a2.real(),      s.a2.imag(), s.j_minus.real(),
          s.j_minus.imag(), s.j_z,  s.photons_cavity2, to_c(s.phase)};
}

SystemState from_c(sl_picture picture, const sl_system_state& s) {
  if (picture == SL_PICTURE_DICKE) {
    return DickeState{{s.f1_re, s.f1_im}, {s.f2_re, s.f2_im}, {s.j_minus_re, s.j_minus_im}, s.j_z};
  }
  return SupermodeState{{s.f1_re, s.f1_im},
                        {s.f2_re, s.f2_im},
                        {s.j_minus_re, s.j_minus_im},
                        s.j_z,
                        {s.b_re, s.b_im}};
}

sl_system_state to_c(const SystemState& s) {
  sl_system_state out{};
  if (const auto* d = std::get_if<DickeState>(&s)) {
    out = {d->a1.real(), d->a1.imag(), d->a2.real(), d->a2.imag(), d->j_minus.real(),
           d->j_minus.imag(), d->j_z, 0.0, 0.0};
  } else {
    const auto& m = std::get<SupermodeState>(s);
    out = {m.a_plus.real(), m.a_plus.imag(), m.a_minus.real(), m.a_minus.imag(),
           m.j_minus.real(), m.j_minus.imag(), m.j_z, m.b.real(), m.b.imag()};
  }
  return out;
}

sl_status emit_params(DerivedParams value, sl_params** out) {
  *out = new sl_params{std::move(value)};
  return SL_OK;
}

char* dup_string(const std::string& s) {
  auto* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return buf;
}

}  // namespace

extern "C" {

const char* sl_status_string(sl_status status) {
  switch (status) {
    case SL_OK:
      return "ok";
    case SL_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case SL_ERR_DOMAIN:
      return "domain error";
    case SL_ERR_CONFIG:
      return "config error";
    case SL_ERR_SPEC:
      return "spec error";
    case SL_ERR_SINGULAR:
      return "singular point";
    case SL_ERR_NO_MINIMUM:
      return "no minimum";
    case SL_ERR_BRACKET:
      return "bracket error";
    case SL_ERR_STIFF:
      return "stiffness";
    case SL_ERR_DIVERGED:
      return "divergence";
    case SL_ERR_IO:
      return "i/o error";
    case SL_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* sl_last_error(void) { return g_last_error.c_str(); }

sl_status sl_params_from_raw(const sl_raw_params* raw, sl_params** out) {
  if (!raw || !out) return invalid("null argument");
  return guarded([&] { emit_params(derive(from_c(*raw)), out); });
}

sl_status sl_params_load_file(const char* path, sl_params** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { emit_params(derive(load_config(path)), out); });
}

sl_status sl_params_load_string(const char* text, sl_params** out) {
  if (!text || !out) return invalid("null argument");
  return guarded([&] { emit_params(derive(parse_config(text)), out); });
}

sl_status sl_params_paper_preset(sl_params** out) {
  if (!out) return invalid("null argument");
  return guarded([&] { emit_params(derive(paper_preset()), out); });
}

sl_status sl_params_with_detuning(const sl_params* p, double detuning, sl_params** out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] { emit_params(with_detuning(p->value, detuning), out); });
}

sl_status sl_params_get(const sl_params* p, sl_derived_params* out) {
  if (!p || !out) return invalid("null argument");
  const auto& d = p->value;
  *out = {to_c(d.raw),     d.wavevector, d.recoil_freq, d.u0,    d.detuning_prime,
          d.omega_plus,    d.omega_minus, d.u_coef,     d.v_coef};
  return SL_OK;
}

void sl_params_free(sl_params* p) { delete p; }

const char* sl_paper_preset_text(void) { return paper_preset_text().data(); }

sl_status sl_recoil_frequency(double wavelength, double mass, double* out) {
  if (!out) return invalid("null argument");
  return guarded([&] { *out = recoil_frequency(wavelength, mass); });
}

sl_status sl_critical_coupling(const sl_params* p, double* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] { *out = critical_coupling(p->value); });
}

sl_status sl_steady_state_at(const sl_params* p, double lambda, sl_steady_state* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] { *out = to_c(steady_state(p->value, lambda)); });
}

sl_status sl_intracavity_photons(const sl_params* p, double lambda, double* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] { *out = intracavity_photons(p->value, lambda); });
}

sl_status sl_minimize_critical_coupling(const sl_params* p, double detuning_min,
                                        double detuning_max, int grid, double* detuning_out,
                                        double* lambda_c_out) {
  if (!p || !detuning_out || !lambda_c_out) return invalid("null argument");
  return guarded([&] {
    const auto m = minimize_critical_coupling(p->value, {detuning_min, detuning_max}, grid);
    *detuning_out = m.detuning;
    *lambda_c_out = m.lambda_c;
  });
}

sl_status sl_population_inversion(const sl_params* p, double lambda, double* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] { *out = population_inversion(p->value, lambda); });
}

sl_status sl_mechanical_gain(const sl_params* p, double lambda, int self_consistent, sl_gain* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    GainOptions options;
    options.self_consistent = self_consistent != 0;
    const auto g = mechanical_gain(p->value, lambda, options);
    *out = {g.lambda_c, g.delta_n, g.g0_term,          g.g1_term,          g.gain, g.freq_pull,
            g.drive_c.real(), g.drive_c.imag(), g.alpha, g.beta, g.n_b, g.saturated ? 1 : 0};
  });
}

sl_status sl_phonon_number(double gain, double gamma_m, double* out) {
  if (!out) return invalid("null argument");
  return guarded([&] { *out = phonon_number(gain, gamma_m); });
}

sl_status sl_threshold_coupling(const sl_params* p, double lo, double hi, double* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    std::optional<Interval> bracket;
    if (lo > 0.0 || hi > 0.0) bracket = Interval{lo, hi};
    *out = threshold_coupling(p->value, bracket);
  });
}

sl_status sl_pump_power(const sl_params* p, double lambda, double* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] { *out = pump_power(lambda, p->value); });
}

sl_status sl_rhs(const sl_params* p, sl_picture picture, const sl_system_state* s, double lambda,
                 sl_system_state* out) {
  if (!p || !s || !out) return invalid("null argument");
  return guarded([&] {
    const SystemState st = from_c(picture, *s);
    if (const auto* d = std::get_if<DickeState>(&st)) {
      *out = to_c(SystemState{rhs_dicke(*d, p->value, lambda)});
    } else {
      *out = to_c(SystemState{rhs_supermode(std::get<SupermodeState>(st), p->value, lambda)});
    }
  });
}

sl_status sl_integrate(const sl_params* p, sl_picture picture, const sl_system_state* s0,
                       double lambda, double t_end, double rel_tol, double abs_tol, int samples,
                       sl_trajectory** out) {
  if (!p || !s0 || !out) return invalid("null argument");
  return guarded([&] {
    IntegrateOptions options;
    options.rel_tol = rel_tol;
    options.abs_tol = abs_tol;
    options.samples = samples;
    *out = new sl_trajectory{integrate(from_c(picture, *s0), p->value, lambda, t_end, options)};
  });
}

size_t sl_trajectory_size(const sl_trajectory* traj) { return traj ? traj->value.times.size() : 0; }

sl_status sl_trajectory_sample(const sl_trajectory* traj, size_t index, double* t,
                               sl_system_state* state) {
  if (!traj || !t || !state) return invalid("null argument");
  if (index >= traj->value.times.size()) return invalid("sample index out of range");
  *t = traj->value.times[index];
  *state = to_c(traj->value.states[index]);
  return SL_OK;
}

sl_status sl_trajectory_write_csv(const sl_trajectory* traj, const char* path) {
  if (!traj || !path) return invalid("null argument");
  return guarded([&] {
    if (std::string_view(path) == "-") {
      write_trajectory_csv(std::cout, traj->value);
      std::cout.flush();
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, std::string("cannot open ") + path + " for writing");
    write_trajectory_csv(out, traj->value);
    if (!out) throw Error(ErrorCode::Io, std::string("write failed: ") + path);
  });
}

double sl_trajectory_conservation_drift(const sl_trajectory* traj) {
  return traj ? conservation_drift(traj->value) : 0.0;
}

void sl_trajectory_free(sl_trajectory* traj) { delete traj; }

sl_status sl_relax_to_steady(const sl_params* p, double lambda, double perturbation, double t_max,
                             sl_relax_result* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    const auto r = relax_to_steady(p->value, lambda, perturbation, t_max);
    *out = {r.converged ? 1 : 0, to_c(r.state),       to_c(r.analytic),
            r.t_final,           r.final_change,      r.residual,
            r.conservation_drift, r.stats.accepted,   r.stats.rejected};
  });
}

sl_status sl_sweep_run(const sl_params* p, const sl_sweep_spec* spec, sl_sweep** out) {
  if (!p || !spec || !out) return invalid("null argument");
  return guarded([&] {
    SweepSpec s;
    s.variable = static_cast<SweepVariable>(spec->variable);
    s.lambda = {spec->lambda.min, spec->lambda.max, spec->lambda.points,
                static_cast<Spacing>(spec->lambda.spacing)};
    s.detuning = {spec->detuning.min, spec->detuning.max, spec->detuning.points,
                  static_cast<Spacing>(spec->detuning.spacing)};
    s.fixed_lambda = spec->fixed_lambda;
    if (spec->has_fixed_detuning) s.fixed_detuning = spec->fixed_detuning;
    s.threads = spec->threads;
    *out = new sl_sweep{run_sweep(p->value, s)};
  });
}

sl_status sl_sweep_figure_preset(const sl_params* p, sl_sweep_spec* out) {
  if (!p || !out) return invalid("null argument");
  const SweepSpec s = figure_preset_spec(p->value);
  *out = sl_sweep_spec{};
  out->variable = SL_SWEEP_LAMBDA;
  out->lambda = {s.lambda.min, s.lambda.max, s.lambda.points, SL_SPACING_LINEAR};
  out->has_fixed_detuning = 1;
  out->fixed_detuning = *s.fixed_detuning;
  return SL_OK;
}

size_t sl_sweep_size(const sl_sweep* sweep) { return sweep ? sweep->rows.size() : 0; }

sl_status sl_sweep_row_at(const sl_sweep* sweep, size_t index, sl_sweep_row* out) {
  if (!sweep || !out) return invalid("null argument");
  if (index >= sweep->rows.size()) return invalid("row index out of range");
  const auto& r = sweep->rows[index];
  *out = {r.lambda, r.detuning, r.lambda_c, r.phase.c_str(), r.photons2, r.delta_n,
          r.g0,     r.g1,       r.gain,     r.n_b,           r.power};
  return SL_OK;
}

sl_status sl_sweep_format(const sl_sweep* sweep, sl_format format, char** out) {
  if (!sweep || !out) return invalid("null argument");
  return guarded([&] {
    std::ostringstream os;
    if (format == SL_FORMAT_JSON) {
      write_json(os, sweep->rows);
    } else {
      write_csv(os, sweep->rows);
    }
    *out = dup_string(os.str());
  });
}

sl_status sl_sweep_write(const sl_sweep* sweep, const char* path, sl_format format) {
  if (!sweep || !path) return invalid("null argument");
  return guarded([&] {
    const auto emit = [&](std::ostream& os) {
      if (format == SL_FORMAT_JSON) {
        write_json(os, sweep->rows);
      } else {
        write_csv(os, sweep->rows);
      }
    };
    if (std::string_view(path) == "-") {
      emit(std::cout);
      std::cout.flush();
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, std::string("cannot open ") + path + " for writing");
    emit(out);
    if (!out) throw Error(ErrorCode::Io, std::string("write failed: ") + path);
  });
}

void sl_sweep_free(sl_sweep* sweep) { delete sweep; }

sl_status sl_report_threshold(const sl_params* p, double detuning, sl_threshold_report* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    const auto r = report_threshold(p->value, detuning);
    *out = {r.detuning, r.lambda_c, r.lambda_th, r.power_th, r.delta_n_th, r.gain_th, r.n_b_th};
  });
}

sl_status sl_report_format(const sl_threshold_report* report, sl_format format, char** out) {
  if (!report || !out) return invalid("null argument");
  return guarded([&] {
    const ThresholdReport r{report->detuning,   report->lambda_c, report->lambda_th,
                            report->power_th,   report->delta_n_th, report->gain_th,
                            report->n_b_th};
    std::ostringstream os;
    if (format == SL_FORMAT_TEXT) {
      write_report_text(os, r);
    } else {
      write_report_json(os, r);
    }
    *out = dup_string(os.str());
  });
}

sl_status sl_validate_dynamics(const sl_params* p, double lambda, double t_max,
                               sl_validation_report* out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    ValidationOptions options;
    if (t_max > 0.0) options.t_max = t_max;
    const auto r = validate_dynamics(p->value, lambda, options);
    *out = {r.lambda,   r.lambda_c,           to_c(r.phase), r.converged ? 1 : 0,
            r.passed ? 1 : 0, r.residual, r.conservation_drift, r.t_final, r.steps};
  });
}

sl_status sl_validation_format(const sl_validation_report* report, char** out) {
  if (!report || !out) return invalid("null argument");
  return guarded([&] {
    ValidationReport r;
    r.lambda = report->lambda;
    r.lambda_c = report->lambda_c;
    r.phase = from_c(report->phase);
    r.converged = report->converged != 0;
    r.passed = report->passed != 0;
    r.residual = report->residual;
    r.conservation_drift = report->conservation_drift;
    r.t_final = report->t_final;
    r.steps = report->steps;
    std::ostringstream os;
    write_validation_text(os, r);
    *out = dup_string(os.str());
  });
}

void sl_string_free(char* s) { std::free(s); }

}  // extern "C"
