#include "params.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace superlase {

namespace {

void require(bool ok, const char* field, const char* condition, double value) {
  if (!ok) {
    throw DomainError(std::string(field) + " must be " + condition + " (got " +
                      std::to_string(value) + ")");
  }
}

}  // namespace

double recoil_frequency(double wavelength, double mass) {
  require(wavelength > 0.0 && std::isfinite(wavelength), "wavelength", "> 0", wavelength);
  require(mass > 0.0 && std::isfinite(mass), "mass", "> 0", mass);
  const double k = constants::two_pi / wavelength;
  return constants::hbar * k * k / (2.0 * mass);
}

void validate(const RawParams& r) {
  require(r.n_atoms >= 1.0, "n_atoms", ">= 1", r.n_atoms);
  require(r.pump_wavelength > 0.0, "pump_wavelength", "> 0", r.pump_wavelength);
  require(r.cavity_loss > 0.0, "cavity_loss", "> 0", r.cavity_loss);
  require(r.mech_freq > 0.0, "mech_freq", "> 0", r.mech_freq);
  require(r.mech_damping > 0.0, "mech_damping", "> 0", r.mech_damping);
  require(r.atom_mass > 0.0, "atom_mass", "> 0", r.atom_mass);
  require(r.beam_waist > 0.0, "beam_waist", "> 0", r.beam_waist);
  require(r.com_coupling >= 0.0, "com_coupling", ">= 0", r.com_coupling);
  require(r.atom_photon_g0 > 0.0, "atom_photon_g0", "> 0", r.atom_photon_g0);
  require(r.dipole_moment >= 0.0, "dipole_moment", ">= 0", r.dipole_moment);

  const double all[] = {r.n_atoms,         r.pump_wavelength,      r.cavity_loss,
                        r.mech_freq,       r.mech_damping,         r.atom_photon_g0,
                        r.collective_stark_NU0, r.com_coupling,    r.cavity_coupling,
                        r.pump_cavity_detuning, r.atom_mass,       r.dipole_moment,
                        r.beam_waist};
  for (double x : all) {
    if (!std::isfinite(x)) throw DomainError("parameter set contains a non-finite value");
  }
}

DerivedParams derive(const RawParams& raw) {
  validate(raw);

  DerivedParams p;
  p.raw = raw;
  p.wavevector = constants::two_pi / raw.pump_wavelength;
  p.recoil_freq = recoil_frequency(raw.pump_wavelength, raw.atom_mass);
  p.u0 = raw.collective_stark_NU0 / raw.n_atoms;

  const double dc = raw.pump_cavity_detuning;
  const double g = raw.cavity_coupling;
  const double gamma = raw.cavity_loss;
  const double quarter_shift = raw.collective_stark_NU0 / 4.0;

  p.detuning_prime = dc - raw.collective_stark_NU0 / 2.0;
  p.omega_plus = -dc + g + quarter_shift;
  p.omega_minus = -dc - g + quarter_shift;
  p.u_coef = g * g + gamma * gamma - dc * p.detuning_prime;
  p.v_coef = gamma * (dc + p.detuning_prime);
  return p;
}

DerivedParams with_detuning(const DerivedParams& p, double detuning) {
  RawParams raw = p.raw;
  raw.pump_cavity_detuning = detuning;
  return derive(raw);
}

}  // namespace superlase
