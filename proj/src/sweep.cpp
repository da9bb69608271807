#include "sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "errors.hpp"
#include "format.hpp"
#include "gain.hpp"

namespace superlase {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_range(const SweepRange& r, const char* name) {
  const std::string n(name);
  if (!std::isfinite(r.min) || !std::isfinite(r.max)) throw SpecError(n + " range must be finite");
  if (!(r.min < r.max)) throw SpecError(n + " range needs min < max");
  if (r.points < 2) throw SpecError(n + " range needs at least 2 points");
  if (r.spacing == Spacing::Log && !(r.min > 0.0)) {
    throw SpecError(n + " log spacing requires min > 0");
  }
}

nlohmann::ordered_json row_json(const SweepRow& r) {
  nlohmann::ordered_json j;
  j["lambda_rad_per_s"] = r.lambda;
  j["detuning_rad_per_s"] = r.detuning;
  j["lambda_c_rad_per_s"] = r.lambda_c;
  j["phase"] = r.phase;
  j["photons2"] = r.photons2;
  j["delta_n"] = r.delta_n;
  j["G0_per_s"] = r.g0;
  j["G1_per_s"] = r.g1;
  j["G_per_s"] = r.gain;
  j["N_b"] = r.n_b;
  j["P_watt"] = r.power;
  return j;
}

}  // namespace

void validate(const SweepSpec& spec) {
  if (spec.variable != SweepVariable::Detuning) validate_range(spec.lambda, "lambda");
  if (spec.variable != SweepVariable::Lambda) validate_range(spec.detuning, "detuning");
  if (spec.variable == SweepVariable::Detuning && !(spec.fixed_lambda >= 0.0)) {
    throw SpecError("fixed lambda must be >= 0");
  }
  if (spec.variable == SweepVariable::Lambda && spec.lambda.min < 0.0) {
    throw SpecError("lambda range must be >= 0");
  }
}

std::vector<double> grid_points(const SweepRange& range) {
  std::vector<double> xs(static_cast<std::size_t>(range.points));
  const double denom = range.points - 1;
  for (int i = 0; i < range.points; ++i) {
    const double f = i / denom;
    double x;
    if (i == 0) {
      x = range.min;
    } else if (i + 1 == range.points) {
      x = range.max;
    } else if (range.spacing == Spacing::Log) {
      x = std::exp(std::log(range.min) + f * (std::log(range.max) - std::log(range.min)));
    } else {
      x = range.min + f * (range.max - range.min);
    }
    xs[static_cast<std::size_t>(i)] = x;
  }
  return xs;
}

SweepRow evaluate_point(const DerivedParams& base, double lambda, double detuning) {
  SweepRow row;
  row.lambda = lambda;
  row.detuning = detuning;
  const DerivedParams p = detuning == base.raw.pump_cavity_detuning ? base
                                                                     : with_detuning(base, detuning);
  try {
    row.power = pump_power(lambda, p);
  } catch (const DomainError&) {
    row.power = kNaN;
  }
  try {
    const SteadyState ss = steady_state(p, lambda);
    const GainBreakdown gb = mechanical_gain(p, lambda);
    row.lambda_c = gb.lambda_c;
    row.phase = std::string(to_string(ss.phase));
    row.photons2 = ss.photons_cavity2;
    row.delta_n = gb.delta_n;
    row.g0 = gb.g0_term;
    row.g1 = gb.g1_term;
    row.gain = gb.gain;
    row.n_b = gb.n_b;
  } catch (const SingularPointError&) {
    row.phase = "singular";
    row.lambda_c = row.photons2 = row.delta_n = kNaN;
    row.g0 = row.g1 = row.gain = row.n_b = kNaN;
  }
  return row;
}

int resolve_thread_count(int requested) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("SUPERLASE_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(n, 1);
}

std::vector<SweepRow> run_sweep(const DerivedParams& p, const SweepSpec& spec) {
  validate(spec);

  std::vector<double> lambdas;
  std::vector<double> detunings;
  switch (spec.variable) {
    case SweepVariable::Lambda:
      lambdas = grid_points(spec.lambda);
      detunings = {spec.fixed_detuning.value_or(p.raw.pump_cavity_detuning)};
      break;
    case SweepVariable::Detuning:
      lambdas = {spec.fixed_lambda};
      detunings = grid_points(spec.detuning);
      break;
    case SweepVariable::Both:
      lambdas = grid_points(spec.lambda);
      detunings = grid_points(spec.detuning);
      break;
  }

  const std::size_t total = lambdas.size() * detunings.size();
  std::vector<SweepRow> rows(total);
  const auto work = [&](std::size_t index) {
    const std::size_t di = index / lambdas.size();
    const std::size_t li = index % lambdas.size();
    rows[index] = evaluate_point(p, lambdas[li], detunings[di]);
  };

  const auto workers =
      static_cast<std::size_t>(std::min<std::size_t>(resolve_thread_count(spec.threads), total));
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < total; i = next++) work(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = total;
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.lambda) << ',' << format_double(r.detuning) << ','
        << format_double(r.lambda_c) << ',' << r.phase << ',' << format_double(r.photons2) << ','
        << format_double(r.delta_n) << ',' << format_double(r.g0) << ',' << format_double(r.g1)
        << ',' << format_double(r.gain) << ',' << format_double(r.n_b) << ','
        << format_double(r.power) << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<SweepRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back(row_json(r));
  out << arr.dump(1) << '\n';
}

SweepSpec figure_preset_spec(const DerivedParams& p) {
  SweepSpec spec;
  spec.variable = SweepVariable::Lambda;
  spec.lambda = {0.0, 10e6, 500, Spacing::Linear};
  spec.fixed_detuning = 0.5 * p.raw.mech_freq;
  return spec;
}

ThresholdReport report_threshold(const DerivedParams& base, double detuning) {
  const DerivedParams p = with_detuning(base, detuning);
  ThresholdReport r;
  r.detuning = detuning;
  r.lambda_c = critical_coupling(p);
  r.lambda_th = threshold_coupling(p);
  r.power_th = pump_power(r.lambda_th, p);
  const GainBreakdown gb = mechanical_gain(p, r.lambda_th);
  r.delta_n_th = gb.delta_n;
  r.gain_th = gb.gain;
  r.n_b_th = gb.n_b;
  return r;
}

void write_report_json(std::ostream& out, const ThresholdReport& r) {
  nlohmann::ordered_json j;
  j["detuning_rad_per_s"] = r.detuning;
  j["lambda_c_rad_per_s"] = r.lambda_c;
  j["lambda_th_rad_per_s"] = r.lambda_th;
  j["P_th_watt"] = r.power_th;
  j["delta_n_th"] = r.delta_n_th;
  j["G_th_per_s"] = r.gain_th;
  j["N_b_th"] = r.n_b_th;
  out << j.dump(1) << '\n';
}

void write_report_text(std::ostream& out, const ThresholdReport& r) {
  out << "detuning          " << format_double(r.detuning) << " rad/s\n"
      << "critical coupling " << format_double(r.lambda_c) << " rad/s\n"
      << "lasing threshold  " << format_double(r.lambda_th) << " rad/s\n"
      << "threshold power   " << format_double(r.power_th * 1e3) << " mW\n"
      << "inversion at th.  " << format_double(r.delta_n_th) << '\n';
}

ValidationReport validate_dynamics(const DerivedParams& p, double lambda,
                                   const ValidationOptions& options) {
  ValidationReport rep;
  rep.lambda = lambda;
  rep.lambda_c = critical_coupling(p);
  const SteadyState analytic = steady_state(p, lambda);
  rep.phase = analytic.phase;
  if (analytic.phase == Phase::Critical) {
    throw DomainError("dynamics validation is undefined at lambda == lambda_c");
  }

  if (analytic.phase == Phase::Superradiant) {
    const RelaxResult r = relax_to_steady(p, lambda, options.perturbation, options.t_max);
    rep.converged = r.converged;
    rep.residual = r.residual;
    rep.conservation_drift = r.conservation_drift;
    rep.t_final = r.t_final;
    rep.steps = r.stats.accepted;
    rep.passed = r.converged && r.residual <= options.residual_limit;
  } else {
    const DickeState s0 = seeded_normal_state(p, options.perturbation * 0.1, 0.0, 20240501ULL);
    DecayOptions decay;
    decay.factor = options.decay_factor;
    const DecayResult d = field_decay_run(p, lambda, s0, options.t_max, decay);
    rep.converged = d.decayed;
    rep.residual = d.final_field / d.initial_field;
    rep.conservation_drift = d.conservation_drift;
    rep.t_final = d.t_final;
    rep.steps = d.stats.accepted;
    rep.passed = d.decayed;
  }
  return rep;
}

void write_validation_text(std::ostream& out, const ValidationReport& r) {
  const char* detail = nullptr;
  if (r.phase == Phase::Superradiant) {
    detail = !r.converged ? "no convergence before t_max"
             : r.passed   ? "relaxed onto the analytic fixed point"
                          : "relaxed, but away from the analytic fixed point";
  } else {
    detail = r.passed ? "field amplitudes decayed" : "fields did not decay before t_max";
  }
  out << (r.passed ? "PASS" : "FAIL") << ": " << detail << '\n'
      << "  phase              " << to_string(r.phase) << '\n'
      << "  lambda             " << format_double(r.lambda) << " rad/s\n"
      << "  lambda_c           " << format_double(r.lambda_c) << " rad/s\n"
      << "  residual           " << format_double(r.residual) << '\n'
      << "  conservation drift " << format_double(r.conservation_drift) << '\n'
      << "  simulated time     " << format_double(r.t_final) << " s\n"
      << "  accepted steps     " << r.steps << '\n';
}

}  // namespace superlase
