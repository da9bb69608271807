#pragma once

#include "constants.hpp"

namespace superlase {

// Input parameter set. Every frequency or rate is an angular quantity in rad/s
// (or a plain rate in 1/s for the damping and optomechanical coupling).
struct RawParams {
  double n_atoms = 0.0;
  double pump_wavelength = 0.0;       // m
  double cavity_loss = 0.0;           // gamma
  double mech_freq = 0.0;             // omega_m
  double mech_damping = 0.0;          // gamma_m
  double atom_photon_g0 = 0.0;        // g0
  double collective_stark_NU0 = 0.0;  // N * U0, may be negative
  double com_coupling = 0.0;          // chi
  double cavity_coupling = 0.0;       // g
  double pump_cavity_detuning = 0.0;  // Delta_c = omega_p - omega_c
  double atom_mass = constants::rb87_mass;
  double dipole_moment = constants::rb87_d2_dipole_moment;
  double beam_waist = 0.0;  // m

  friend bool operator==(const RawParams&, const RawParams&) = default;
};

struct DerivedParams {
  RawParams raw;
  double wavevector = 0.0;       // k = 2 pi / lambda_p
  double recoil_freq = 0.0;      // omega_r = hbar k^2 / 2m
  double u0 = 0.0;               // U0 = NU0 / N
  double detuning_prime = 0.0;   // Delta'_c = Delta_c - NU0 / 2
  double omega_plus = 0.0;       // -Delta_c + g + NU0 / 4
  double omega_minus = 0.0;      // -Delta_c - g + NU0 / 4
  double u_coef = 0.0;           // g^2 + gamma^2 - Delta_c Delta'_c
  double v_coef = 0.0;           // gamma (Delta_c + Delta'_c)

  friend bool operator==(const DerivedParams&, const DerivedParams&) = default;
};

/// Recoil frequency hbar k^2 / 2m for a photon of the given wavelength.
/// Throws DomainError for non-positive inputs.
double recoil_frequency(double wavelength, double mass);

/// Throws DomainError naming the first violated field.
void validate(const RawParams& raw);

/// Pure, deterministic. Throws DomainError if `raw` is invalid.
DerivedParams derive(const RawParams& raw);

/// Convenience: re-derive with a different pump-cavity detuning.
DerivedParams with_detuning(const DerivedParams& p, double detuning);

}  // namespace superlase
