#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "config.hpp"
#include "params.hpp"

namespace test {

// Literal parameter values, kept independent of the bundled config file.
inline constexpr double kTwoPi = 6.283185307179586;
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kEps0 = 8.8541878128e-12;
inline constexpr double kLight = 299792458.0;

inline superlase::RawParams literal_raw() {
  superlase::RawParams r;
  r.n_atoms = 1e5;
  r.pump_wavelength = 784.3e-9;
  r.cavity_loss = kTwoPi * 1e6;
  r.mech_freq = kTwoPi * 20e6;
  r.mech_damping = 100.0;
  r.atom_photon_g0 = kTwoPi * 14e6;
  r.collective_stark_NU0 = -kTwoPi * 2e6;
  r.com_coupling = 300.0;
  r.cavity_coupling = kTwoPi * 10e6;
  r.pump_cavity_detuning = kTwoPi * 10e6;
  r.atom_mass = 1.44316e-25;
  r.dipole_moment = 3.584e-29;
  r.beam_waist = 25e-6;
  return r;
}

inline superlase::DerivedParams paper() { return superlase::derive(superlase::paper_preset()); }

inline double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

}  // namespace test
