#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "params.hpp"

namespace superlase {

enum class SweepVariable { Lambda, Detuning, Both };
enum class Spacing { Linear, Log };
enum class OutputFormat { Csv, Json };

struct SweepRange {
  double min = 0.0;
  double max = 0.0;
  int points = 2;
  Spacing spacing = Spacing::Linear;
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::Lambda;
  SweepRange lambda;    // rad/s; used for Lambda and Both
  SweepRange detuning;  // rad/s; used for Detuning and Both
  // Held fixed when not swept. Detuning defaults to the configured value.
  double fixed_lambda = 0.0;
  std::optional<double> fixed_detuning;
  // 0 = SUPERLASE_THREADS or hardware concurrency.
  int threads = 0;
};

struct SweepRow {
  double lambda = 0.0;
  double detuning = 0.0;
  double lambda_c = 0.0;
  std::string phase;  // normal | critical | superradiant | singular
  double photons2 = 0.0;
  double delta_n = 0.0;
  double g0 = 0.0;
  double g1 = 0.0;
  double gain = 0.0;
  double n_b = 0.0;
  double power = 0.0;
};

inline constexpr const char* kSweepCsvHeader =
    "lambda_rad_per_s,detuning_rad_per_s,lambda_c_rad_per_s,phase,photons2,delta_n,"
    "G0_per_s,G1_per_s,G_per_s,N_b,P_watt";

/// Throws SpecError when a range is empty, has fewer than 2 points, or uses
/// log spacing with min <= 0.
void validate(const SweepSpec& spec);

std::vector<double> grid_points(const SweepRange& range);

/// Evaluates the params -> steady state -> gain pipeline at one point. Points
/// on the singular locus come back with phase "singular" and NaN observables.
SweepRow evaluate_point(const DerivedParams& p, double lambda, double detuning);

/// Rows ordered by detuning, then lambda, ascending; identical for any thread count.
std::vector<SweepRow> run_sweep(const DerivedParams& p, const SweepSpec& spec);

/// Worker count from SUPERLASE_THREADS (0 or unset = hardware concurrency).
int resolve_thread_count(int requested);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_json(std::ostream& out, const std::vector<SweepRow>& rows);

/// lambda from 0 to 10e6 rad/s in 500 points at Delta_c = omega_m / 2.
SweepSpec figure_preset_spec(const DerivedParams& p);

struct ThresholdReport {
  double detuning = 0.0;
  double lambda_c = 0.0;
  double lambda_th = 0.0;
  double power_th = 0.0;
  double delta_n_th = 0.0;
  double gain_th = 0.0;
  double n_b_th = 0.0;
};

/// Throws SingularPointError or BracketError.
ThresholdReport report_threshold(const DerivedParams& p, double detuning);

void write_report_json(std::ostream& out, const ThresholdReport& report);
void write_report_text(std::ostream& out, const ThresholdReport& report);

struct ValidationOptions {
  double perturbation = 0.01;
  double t_max = 5.0;  // s of simulated time
  double residual_limit = 1e-3;
  double decay_factor = 1e-8;
};

struct ValidationReport {
  double lambda = 0.0;
  double lambda_c = 0.0;
  Phase phase = Phase::Normal;
  bool converged = false;
  bool passed = false;
  double residual = 0.0;  // superradiant: relative amplitude error; normal: final/initial field
  double conservation_drift = 0.0;
  double t_final = 0.0;
  long long steps = 0;
};

/// Above lambda_c: relaxation from the kicked analytic fixed point and
/// comparison against the analytic amplitudes. Below: field decay from a
/// seeded small state. Throws DomainError at lambda == lambda_c.
ValidationReport validate_dynamics(const DerivedParams& p, double lambda,
                                   const ValidationOptions& options = {});

void write_validation_text(std::ostream& out, const ValidationReport& report);

}  // namespace superlase
