/* C interface to the superlase library.
 *
 * Every entry point returns an sl_status. On failure a message describing the
 * most recent error on the calling thread is available from sl_last_error().
 * Objects are opaque and owned by the caller once returned; release them with
 * the matching *_free function. All angular frequencies are in rad/s.
 */
#ifndef SUPERLASE_H
#define SUPERLASE_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(SUPERLASE_BUILDING)
#define SL_API __declspec(dllexport)
#else
#define SL_API __declspec(dllimport)
#endif
#else
#define SL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sl_status {
  SL_OK = 0,
  SL_ERR_INVALID_ARGUMENT = 1,
  SL_ERR_DOMAIN = 2,
  SL_ERR_CONFIG = 3,
  SL_ERR_SPEC = 4,
  SL_ERR_SINGULAR = 5,
  SL_ERR_NO_MINIMUM = 6,
  SL_ERR_BRACKET = 7,
  SL_ERR_STIFF = 8,
  SL_ERR_DIVERGED = 9,
  SL_ERR_IO = 10,
  SL_ERR_INTERNAL = 11
} sl_status;

typedef enum sl_phase { SL_PHASE_NORMAL = 0, SL_PHASE_CRITICAL = 1, SL_PHASE_SUPERRADIANT = 2 } sl_phase;

typedef enum sl_picture { SL_PICTURE_DICKE = 0, SL_PICTURE_SUPERMODE = 1 } sl_picture;

typedef enum sl_format { SL_FORMAT_CSV = 0, SL_FORMAT_JSON = 1, SL_FORMAT_TEXT = 2 } sl_format;

typedef enum sl_sweep_variable {
  SL_SWEEP_LAMBDA = 0,
  SL_SWEEP_DETUNING = 1,
  SL_SWEEP_BOTH = 2
} sl_sweep_variable;

typedef enum sl_spacing { SL_SPACING_LINEAR = 0, SL_SPACING_LOG = 1 } sl_spacing;

typedef struct sl_params sl_params;
typedef struct sl_sweep sl_sweep;
typedef struct sl_trajectory sl_trajectory;

/* Input parameter set. */
typedef struct sl_raw_params {
  double n_atoms;
  double pump_wavelength;
  double cavity_loss;
  double mech_freq;
  double mech_damping;
  double atom_photon_g0;
  double collective_stark_NU0;
  double com_coupling;
  double cavity_coupling;
  double pump_cavity_detuning;
  double atom_mass;
  double dipole_moment;
  double beam_waist;
} sl_raw_params;

typedef struct sl_derived_params {
  sl_raw_params raw;
  double wavevector;
  double recoil_freq;
  double u0;
  double detuning_prime;
  double omega_plus;
  double omega_minus;
  double u_coef;
  double v_coef;
} sl_derived_params;

typedef struct sl_steady_state {
  double a1_re, a1_im;
  double a2_re, a2_im;
  double j_minus_re, j_minus_im;
  double j_z;
  double photons_cavity2;
  sl_phase phase;
} sl_steady_state;

typedef struct sl_gain {
  double lambda_c;
  double delta_n;
  double g0_term;
  double g1_term;
  double gain;
  double freq_pull;
  double drive_c_re, drive_c_im;
  double alpha;
  double beta;
  double n_b;
  int saturated;
} sl_gain;

typedef struct sl_system_state {
  /* Dicke picture: a1, a2. Supermode picture: a_plus, a_minus and b. */
  double f1_re, f1_im;
  double f2_re, f2_im;
  double j_minus_re, j_minus_im;
  double j_z;
  double b_re, b_im;
} sl_system_state;

typedef struct sl_sweep_range {
  double min;
  double max;
  int points;
  sl_spacing spacing;
} sl_sweep_range;

typedef struct sl_sweep_spec {
  sl_sweep_variable variable;
  sl_sweep_range lambda;
  sl_sweep_range detuning;
  double fixed_lambda;
  int has_fixed_detuning;
  double fixed_detuning;
  int threads; /* 0: SUPERLASE_THREADS or hardware concurrency */
} sl_sweep_spec;

typedef struct sl_sweep_row {
  double lambda;
  double detuning;
  double lambda_c;
  const char* phase; /* valid while the owning sl_sweep lives */
  double photons2;
  double delta_n;
  double g0;
  double g1;
  double gain;
  double n_b;
  double power;
} sl_sweep_row;

typedef struct sl_threshold_report {
  double detuning;
  double lambda_c;
  double lambda_th;
  double power_th;
  double delta_n_th;
  double gain_th;
  double n_b_th;
} sl_threshold_report;

typedef struct sl_relax_result {
  int converged;
  sl_steady_state state;
  sl_steady_state analytic;
  double t_final;
  double final_change;
  double residual;
  double conservation_drift;
  long long accepted_steps;
  long long rejected_steps;
} sl_relax_result;

typedef struct sl_validation_report {
  double lambda;
  double lambda_c;
  sl_phase phase;
  int converged;
  int passed;
  double residual;
  double conservation_drift;
  double t_final;
  long long steps;
} sl_validation_report;

/* ---- errors ---- */
SL_API const char* sl_status_string(sl_status status);
SL_API const char* sl_last_error(void);

/* ---- parameters ---- */
SL_API sl_status sl_params_from_raw(const sl_raw_params* raw, sl_params** out);
SL_API sl_status sl_params_load_file(const char* path, sl_params** out);
SL_API sl_status sl_params_load_string(const char* text, sl_params** out);
SL_API sl_status sl_params_paper_preset(sl_params** out);
SL_API sl_status sl_params_with_detuning(const sl_params* p, double detuning, sl_params** out);
SL_API sl_status sl_params_get(const sl_params* p, sl_derived_params* out);
SL_API void sl_params_free(sl_params* p);
SL_API const char* sl_paper_preset_text(void);
SL_API sl_status sl_recoil_frequency(double wavelength, double mass, double* out);

/* ---- superradiant transition ---- */
SL_API sl_status sl_critical_coupling(const sl_params* p, double* out);
SL_API sl_status sl_steady_state_at(const sl_params* p, double lambda, sl_steady_state* out);
SL_API sl_status sl_intracavity_photons(const sl_params* p, double lambda, double* out);
SL_API sl_status sl_minimize_critical_coupling(const sl_params* p, double detuning_min,
                                               double detuning_max, int grid,
                                               double* detuning_out, double* lambda_c_out);

/* ---- gain ---- */
SL_API sl_status sl_population_inversion(const sl_params* p, double lambda, double* out);
SL_API sl_status sl_mechanical_gain(const sl_params* p, double lambda, int self_consistent,
                                    sl_gain* out);
SL_API sl_status sl_phonon_number(double gain, double gamma_m, double* out);
/* lo <= 0 and hi <= 0 selects the default bracket [1.001, 20] * lambda_c. */
SL_API sl_status sl_threshold_coupling(const sl_params* p, double lo, double hi, double* out);
SL_API sl_status sl_pump_power(const sl_params* p, double lambda, double* out);

/* ---- dynamics ---- */
SL_API sl_status sl_rhs(const sl_params* p, sl_picture picture, const sl_system_state* s,
                        double lambda, sl_system_state* out);
SL_API sl_status sl_integrate(const sl_params* p, sl_picture picture, const sl_system_state* s0,
                              double lambda, double t_end, double rel_tol, double abs_tol,
                              int samples, sl_trajectory** out);
SL_API size_t sl_trajectory_size(const sl_trajectory* traj);
SL_API sl_status sl_trajectory_sample(const sl_trajectory* traj, size_t index, double* t,
                                      sl_system_state* state);
SL_API sl_status sl_trajectory_write_csv(const sl_trajectory* traj, const char* path);
SL_API double sl_trajectory_conservation_drift(const sl_trajectory* traj);
SL_API void sl_trajectory_free(sl_trajectory* traj);
SL_API sl_status sl_relax_to_steady(const sl_params* p, double lambda, double perturbation,
                                    double t_max, sl_relax_result* out);

/* ---- sweeps and reports ---- */
SL_API sl_status sl_sweep_run(const sl_params* p, const sl_sweep_spec* spec, sl_sweep** out);
SL_API sl_status sl_sweep_figure_preset(const sl_params* p, sl_sweep_spec* out);
SL_API size_t sl_sweep_size(const sl_sweep* sweep);
SL_API sl_status sl_sweep_row_at(const sl_sweep* sweep, size_t index, sl_sweep_row* out);
/* path "-" writes to stdout. */
SL_API sl_status sl_sweep_write(const sl_sweep* sweep, const char* path, sl_format format);
/* Returns a heap string released with sl_string_free. */
SL_API sl_status sl_sweep_format(const sl_sweep* sweep, sl_format format, char** out);
SL_API void sl_sweep_free(sl_sweep* sweep);

SL_API sl_status sl_report_threshold(const sl_params* p, double detuning,
                                     sl_threshold_report* out);
/* JSON object or human-readable text. */
SL_API sl_status sl_report_format(const sl_threshold_report* report, sl_format format, char** out);
SL_API sl_status sl_validate_dynamics(const sl_params* p, double lambda, double t_max,
                                      sl_validation_report* out);
SL_API sl_status sl_validation_format(const sl_validation_report* report, char** out);

SL_API void sl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SUPERLASE_H */
