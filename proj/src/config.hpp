#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "params.hpp"

namespace superlase {

// Sectioned `key = value` format. Every key carries a unit suffix, e.g.
//
//   [cavity]
//   cavity_loss_two_pi_hz = 1e6     # stored as 2*pi*1e6 rad/s
//   cavity_coupling_rad_per_s = 6.283e7
//
// Frequencies and rates accept `_rad_per_s`, `_per_s` (both stored as-is) and
// `_two_pi_hz` (multiplied by 2*pi). Lengths use `_m`, the mass `_kg`, the
// dipole moment `_c_m`, the atom number `_count`. `atom_mass` and
// `dipole_moment` default to 87Rb when absent.
//
// Errors are ConfigError with the offending line and key.
RawParams parse_config(std::string_view text, std::string_view source_name = "<config>");

RawParams load_config(const std::filesystem::path& path);

/// Text of the bundled `paper.cfg` preset.
std::string_view paper_preset_text();

RawParams paper_preset();

}  // namespace superlase
