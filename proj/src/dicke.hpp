#pragma once

#include <complex>
#include <string_view>

#include "numeric.hpp"
#include "params.hpp"

namespace superlase {

using cplx = std::complex<double>;

enum class Phase { Normal, Critical, Superradiant };

std::string_view to_string(Phase phase) noexcept;

// Analytic fixed point of the two-cavity mean-field equations.
struct SteadyState {
  cplx a1;
  cplx a2;
  cplx j_minus;
  double j_z = 0.0;
  double photons_cavity2 = 0.0;
  Phase phase = Phase::Normal;
};

/// gamma*v - Delta_c*u. Its sign fixes the sign of J_z on the superradiant
/// branch; its zero set is where the critical coupling diverges.
double transition_discriminant(const DerivedParams& p);

/// lambda_c = (1/2) sqrt(omega_r (u^2 + v^2) / |gamma v - Delta_c u|).
/// Throws SingularPointError on the locus gamma v = Delta_c u.
double critical_coupling(const DerivedParams& p);

/// Fixed point at pump coupling `lambda` (rad/s).
///
/// Below and at lambda_c all amplitudes vanish and J_z sits at the pole
/// sign(gamma v - Delta_c u) * N/2, the normal state the superradiant branch
/// grows out of. Above lambda_c, J_z follows the signed closed form and
/// J_minus is taken real and positive (the mirror solution differs by a sign).
SteadyState steady_state(const DerivedParams& p, double lambda);

/// |a_{2,s}|^2 = N lambda^2 (Delta_c^2 + gamma^2) / (u^2 + v^2) * (1 - lambda_c^4 / lambda^4),
/// clamped to zero for lambda <= lambda_c.
double intracavity_photons(const DerivedParams& p, double lambda);

struct CriticalMinimum {
  double detuning = 0.0;
  double lambda_c = 0.0;
  double best_grid_detuning = 0.0;
  double best_grid_lambda_c = 0.0;
};

/// Minimizes lambda_c over the pump-cavity detuning. Singular detunings are
/// skipped; throws NoMinimumError if every grid point is singular.
CriticalMinimum minimize_critical_coupling(const DerivedParams& p, Interval detuning_range,
                                           int grid);

}  // namespace superlase
