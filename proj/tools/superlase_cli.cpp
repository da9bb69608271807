// superlase: sweeps, threshold reports and dynamics checks from the command line.

#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <superlase/superlase.h>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitValidation = 4;

struct ParamsDeleter {
  void operator()(sl_params* p) const { sl_params_free(p); }
};
struct SweepDeleter {
  void operator()(sl_sweep* s) const { sl_sweep_free(s); }
};
struct StringDeleter {
  void operator()(char* s) const { sl_string_free(s); }
};
using ParamsPtr = std::unique_ptr<sl_params, ParamsDeleter>;
using SweepPtr = std::unique_ptr<sl_sweep, SweepDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Thrown inside a subcommand to unwind with a given exit code.
struct Exit {
  int code;
};

int exit_code_for(sl_status s, bool numeric_is_fatal) {
  switch (s) {
    case SL_OK:
      return kExitOk;
    case SL_ERR_SINGULAR:
    case SL_ERR_NO_MINIMUM:
    case SL_ERR_BRACKET:
    case SL_ERR_STIFF:
    case SL_ERR_DIVERGED:
      return numeric_is_fatal ? kExitNumeric : kExitConfig;
    default:
      return kExitConfig;
  }
}

void check(sl_status s, const char* what, bool numeric_is_fatal = true) {
  if (s == SL_OK) return;
  std::fprintf(stderr, "superlase: %s: %s (%s)\n", what, sl_last_error(), sl_status_string(s));
  throw Exit{exit_code_for(s, numeric_is_fatal)};
}

ParamsPtr load_params(const std::string& config) {
  sl_params* raw = nullptr;
  if (config.empty()) {
    check(sl_params_paper_preset(&raw), "preset");
  } else {
    check(sl_params_load_file(config.c_str(), &raw), "config");
  }
  return ParamsPtr(raw);
}

ParamsPtr at_detuning(const ParamsPtr& p, std::optional<double> detuning) {
  if (!detuning) return nullptr;
  sl_params* raw = nullptr;
  check(sl_params_with_detuning(p.get(), *detuning, &raw), "detuning");
  return ParamsPtr(raw);
}

void emit_sweep(const sl_params* p, const sl_sweep_spec& spec, const std::string& output,
                sl_format format) {
  sl_sweep* raw = nullptr;
  check(sl_sweep_run(p, &spec, &raw), "sweep", false);
  SweepPtr sweep(raw);
  check(sl_sweep_write(sweep.get(), output.c_str(), format), "output", false);
}

void print_owned(char* text, FILE* stream) {
  StringPtr owned(text);
  std::fputs(owned.get(), stream);
}

struct RangeOpts {
  double min = 0.0;
  double max = 0.0;
  int points = 100;
  std::string spacing = "linear";

  sl_sweep_range to_c() const {
    return {min, max, points, spacing == "log" ? SL_SPACING_LOG : SL_SPACING_LINEAR};
  }
};

void add_range(CLI::App* cmd, RangeOpts& r, const std::string& name) {
  cmd->add_option("--" + name + "-min", r.min, name + " range start (rad/s)");
  cmd->add_option("--" + name + "-max", r.max, name + " range end (rad/s)");
  cmd->add_option("--" + name + "-points", r.points, "grid points")->capture_default_str();
  cmd->add_option("--" + name + "-spacing", r.spacing, "linear or log")
      ->check(CLI::IsMember({"linear", "log"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superradiance-driven phonon laser: sweeps, thresholds, dynamics checks"};
  app.require_subcommand(1);

  std::string config;
  app.add_option("-c,--config", config, "parameter file (default: bundled preset)")
      ->check(CLI::ExistingFile);

  const std::map<std::string, sl_format> table_formats{{"csv", SL_FORMAT_CSV},
                                                       {"json", SL_FORMAT_JSON}};

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate observables on a lambda/detuning grid");
  std::string variable = "lambda";
  RangeOpts lambda_range, detuning_range;
  double fixed_lambda = 0.0;
  std::optional<double> fixed_detuning;
  std::string sweep_out = "-";
  sl_format sweep_format = SL_FORMAT_CSV;
  int threads = 0;
  sweep_cmd->add_option("--variable", variable, "lambda, detuning or both")
      ->check(CLI::IsMember({"lambda", "detuning", "both"}))
      ->capture_default_str();
  add_range(sweep_cmd, lambda_range, "lambda");
  add_range(sweep_cmd, detuning_range, "detuning");
  sweep_cmd->add_option("--lambda", fixed_lambda, "lambda when sweeping detuning only (rad/s)");
  sweep_cmd->add_option("--detuning", fixed_detuning,
                        "detuning when sweeping lambda only (rad/s; default from config)");
  sweep_cmd->add_option("-o,--output", sweep_out, "output file, - for stdout")
      ->capture_default_str();
  sweep_cmd->add_option("-f,--format", sweep_format, "csv or json")
      ->transform(CLI::CheckedTransformer(table_formats, CLI::ignore_case));
  sweep_cmd->add_option("-j,--threads", threads, "worker threads (0: SUPERLASE_THREADS or auto)")
      ->check(CLI::NonNegativeNumber);

  // threshold
  auto* threshold_cmd = app.add_subcommand("threshold", "critical coupling, lasing threshold, power");
  std::optional<double> threshold_detuning;
  std::string threshold_format = "text";
  threshold_cmd->add_option("--detuning", threshold_detuning,
                            "pump-cavity detuning (rad/s; default from config)");
  threshold_cmd->add_option("-f,--format", threshold_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  // validate
  auto* validate_cmd =
      app.add_subcommand("validate", "compare integrated dynamics with the analytic steady state");
  std::optional<double> validate_lambda;
  std::optional<double> validate_factor;
  double t_max = 0.0;
  std::optional<double> validate_detuning;
  auto* lambda_opt = validate_cmd->add_option("--lambda", validate_lambda, "coupling (rad/s)");
  validate_cmd->add_option("--factor", validate_factor, "coupling as a multiple of lambda_c")
      ->excludes(lambda_opt);
  validate_cmd->add_option("--detuning", validate_detuning, "pump-cavity detuning (rad/s)");
  validate_cmd->add_option("--t-max", t_max, "simulated time limit in s (default 5)")
      ->check(CLI::PositiveNumber);

  // preset
  auto* preset_cmd = app.add_subcommand("preset", "figure data on the bundled grid");
  std::string preset_name;
  std::string preset_out = "-";
  sl_format preset_format = SL_FORMAT_CSV;
  preset_cmd->add_option("name", preset_name, "fig2 (gain) or fig3 (phonon number)")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3"}));
  preset_cmd->add_option("-o,--output", preset_out, "output file, - for stdout")
      ->capture_default_str();
  preset_cmd->add_option("-f,--format", preset_format, "csv or json")
      ->transform(CLI::CheckedTransformer(table_formats, CLI::ignore_case));
  preset_cmd->add_option("-j,--threads", threads, "worker threads (0: SUPERLASE_THREADS or auto)")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const ParamsPtr params = load_params(config);

    if (*sweep_cmd) {
      sl_sweep_spec spec{};
      spec.variable = variable == "lambda"     ? SL_SWEEP_LAMBDA
                      : variable == "detuning" ? SL_SWEEP_DETUNING
                                               : SL_SWEEP_BOTH;
      spec.lambda = lambda_range.to_c();
      spec.detuning = detuning_range.to_c();
      spec.fixed_lambda = fixed_lambda;
      spec.has_fixed_detuning = fixed_detuning ? 1 : 0;
      spec.fixed_detuning = fixed_detuning.value_or(0.0);
      spec.threads = threads;
      emit_sweep(params.get(), spec, sweep_out, sweep_format);
      return kExitOk;
    }

    if (*threshold_cmd) {
      sl_derived_params d{};
      check(sl_params_get(params.get(), &d), "params");
      const double detuning = threshold_detuning.value_or(d.raw.pump_cavity_detuning);
      sl_threshold_report report{};
      check(sl_report_threshold(params.get(), detuning, &report), "threshold");
      char* text = nullptr;
      check(sl_report_format(&report, threshold_format == "json" ? SL_FORMAT_JSON : SL_FORMAT_TEXT,
                             &text),
            "format");
      print_owned(text, stdout);
      return kExitOk;
    }

    if (*validate_cmd) {
      const ParamsPtr shifted = at_detuning(params, validate_detuning);
      const sl_params* p = shifted ? shifted.get() : params.get();
      double lambda_c = 0.0;
      check(sl_critical_coupling(p, &lambda_c), "critical coupling");
      double lambda = 1.5 * lambda_c;
      if (validate_lambda) lambda = *validate_lambda;
      if (validate_factor) lambda = *validate_factor * lambda_c;
      sl_validation_report report{};
      check(sl_validate_dynamics(p, lambda, t_max, &report), "validate");
      char* text = nullptr;
      check(sl_validation_format(&report, &text), "format");
      print_owned(text, stdout);
      return report.passed ? kExitOk : kExitValidation;
    }

    if (*preset_cmd) {
      sl_sweep_spec spec{};
      check(sl_sweep_figure_preset(params.get(), &spec), "preset");
      spec.threads = threads;
      emit_sweep(params.get(), spec, preset_out, preset_format);
      return kExitOk;
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitConfig;
}
