#pragma once

#include <numbers>

// CODATA 2018 exact/recommended values, SI units.
namespace superlase::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double boltzmann = 1.380649e-23;      // J/K

// 87Rb defaults.
inline constexpr double rb87_mass = 1.44316e-25;            // kg
inline constexpr double rb87_d2_dipole_moment = 3.584e-29;  // C m

}  // namespace superlase::constants
