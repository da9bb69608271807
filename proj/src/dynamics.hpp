#pragma once

#include <ostream>
#include <variant>
#include <vector>

#include "dicke.hpp"
#include "dopri5.hpp"
#include "params.hpp"

namespace superlase {

enum class Picture { Dicke, Supermode };

// Original two-cavity mode amplitudes; no mechanical mode in this picture.
struct DickeState {
  cplx a1;
  cplx a2;
  cplx j_minus;
  double j_z = 0.0;
};

// a_plus/a_minus = (a1 +- a2)/sqrt(2), plus the membrane amplitude b.
struct SupermodeState {
  cplx a_plus;
  cplx a_minus;
  cplx j_minus;
  double j_z = 0.0;
  cplx b;
};

using SystemState = std::variant<DickeState, SupermodeState>;

Picture picture_of(const SystemState& s);

/// Right-hand side of the two-cavity mean-field equations (no membrane).
DickeState rhs_dicke(const DickeState& s, const DerivedParams& p, double lambda);

/// Right-hand side of the supermode equations including the membrane.
SupermodeState rhs_supermode(const SupermodeState& s, const DerivedParams& p, double lambda);

SupermodeState to_supermode(const DickeState& s, cplx b = {});
DickeState to_dicke(const SupermodeState& s);

struct Trajectory {
  Picture picture = Picture::Dicke;
  std::vector<double> times;
  std::vector<SystemState> states;
  IntegratorStats stats;
};

struct IntegrateOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  // Output times in (0, t_end]; t = 0 is always recorded. Empty means
  // `samples` uniformly spaced points.
  std::vector<double> sample_times;
  int samples = 2;
  double h_min = 1e-18;
};

/// Adaptive Dormand-Prince 5(4) integration from t = 0 to t_end; the picture
/// follows the variant held by `s0`. Throws SpecError for bad tolerances or
/// sample times, StiffnessError on step underflow, DivergenceError on NaN/Inf.
Trajectory integrate(const SystemState& s0, const DerivedParams& p, double lambda, double t_end,
                     const IntegrateOptions& options = {});

/// |J_-|^2 + J_z^2.
double spin_length_squared(const SystemState& s);

/// Max over the trajectory of the relative deviation of |J_-|^2 + J_z^2 from its initial value.
double conservation_drift(const Trajectory& traj);

/// Header `t,re_a1,im_a1,re_a2,im_a2,re_Jm,im_Jm,Jz` plus `,re_b,im_b` for the
/// supermode picture (whose a1/a2 columns hold a_plus/a_minus).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Deterministic kick used by relaxation studies: every component of `s` is
/// multiplied by (1 + epsilon), then J_z is re-projected onto the sphere
/// |J_-|^2 + J_z^2 = N^2/4 keeping its sign.
DickeState perturb(const DickeState& s, double epsilon, double n_atoms);

DickeState to_dicke_state(const SteadyState& s);

struct RelaxOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  // Convergence window in units of 1/gamma and the threshold on the scaled
  // state change across one window.
  double window_cavity_lifetimes = 10.0;
  double threshold = 1e-8;
};

struct RelaxResult {
  bool converged = false;
  SteadyState state;          // numeric state repackaged; phase copied from the analytic one
  SteadyState analytic;
  double t_final = 0.0;
  double final_change = 0.0;  // scaled change over the last window
  double residual = 0.0;      // max relative deviation from the analytic amplitudes
  double conservation_drift = 0.0;
  long long windows = 0;
  IntegratorStats stats;
};

/// Integrates the two-cavity equations from the perturbed analytic fixed point
/// until the state changes by less than `threshold` (per component, scaled by
/// the analytic magnitude or the kick size) across one window, or until
/// t_max. Non-convergence is reported in the result, not thrown.
RelaxResult relax_to_steady(const DerivedParams& p, double lambda, double perturbation,
                            double t_max, const RelaxOptions& options = {});

struct DecayOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-16;
  double factor = 1e-8;  // required ratio final/initial field amplitude
  double window_cavity_lifetimes = 10.0;
};

struct DecayResult {
  bool decayed = false;
  double initial_field = 0.0;  // max(|a1|, |a2|) at t = 0
  double final_field = 0.0;    // largest field amplitude over the trailing span
  double t_final = 0.0;
  double conservation_drift = 0.0;
  IntegratorStats stats;
};

/// Small deterministic pseudo-random state near the normal-phase pole:
/// field components uniform in [-amplitude, amplitude], J_- components
/// uniform in spin_tilt * N/2 * [-1, 1], J_z on the sphere with the sign
/// of the analytic normal state.
DickeState seeded_normal_state(const DerivedParams& p, double amplitude, double spin_tilt,
                               unsigned long long seed);

/// Integrates the two-cavity equations from `s0` until the field amplitudes
/// have stayed below `factor` times their initial size for two bare recoil
/// periods (longer than the slow spin oscillation), or until t_max.
DecayResult field_decay_run(const DerivedParams& p, double lambda, const DickeState& s0,
                            double t_max, const DecayOptions& options = {});

}  // namespace superlase
