#include "config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "errors.hpp"
#include "paper_preset.inc"

namespace superlase {

namespace {

enum class Kind { Angular, Length, Mass, Dipole, Count };

struct FieldSpec {
  std::string_view name;
  std::string_view section;
  Kind kind;
  bool required;
  double RawParams::*member;
};

constexpr std::array<FieldSpec, 13> kFields{{
    {"n_atoms", "atoms", Kind::Count, true, &RawParams::n_atoms},
    {"atom_photon_g0", "atoms", Kind::Angular, true, &RawParams::atom_photon_g0},
    {"collective_stark_NU0", "atoms", Kind::Angular, true, &RawParams::collective_stark_NU0},
    {"atom_mass", "atoms", Kind::Mass, false, &RawParams::atom_mass},
    {"dipole_moment", "atoms", Kind::Dipole, false, &RawParams::dipole_moment},
    {"cavity_loss", "cavity", Kind::Angular, true, &RawParams::cavity_loss},
    {"cavity_coupling", "cavity", Kind::Angular, true, &RawParams::cavity_coupling},
    {"mech_freq", "mechanics", Kind::Angular, true, &RawParams::mech_freq},
    {"mech_damping", "mechanics", Kind::Angular, true, &RawParams::mech_damping},
    {"com_coupling", "mechanics", Kind::Angular, true, &RawParams::com_coupling},
    {"pump_wavelength", "pump", Kind::Length, true, &RawParams::pump_wavelength},
    {"beam_waist", "pump", Kind::Length, true, &RawParams::beam_waist},
    {"pump_cavity_detuning", "pump", Kind::Angular, true, &RawParams::pump_cavity_detuning},
}};

struct Suffix {
  std::string_view text;
  Kind kind;
  double scale;
};

constexpr std::array<Suffix, 7> kSuffixes{{
    {"_two_pi_hz", Kind::Angular, constants::two_pi},
    {"_rad_per_s", Kind::Angular, 1.0},
    {"_per_s", Kind::Angular, 1.0},
    {"_m", Kind::Length, 1.0},
    {"_kg", Kind::Mass, 1.0},
    {"_c_m", Kind::Dipole, 1.0},
    {"_count", Kind::Count, 1.0},
}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(std::string_view source, int line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

// Longest suffix wins so `_rad_per_s` is not read as `_per_s`.
std::optional<std::pair<const FieldSpec*, const Suffix*>> resolve(std::string_view key) {
  for (const auto& suffix : kSuffixes) {
    if (key.size() <= suffix.text.size() || !key.ends_with(suffix.text)) continue;
    const auto base = key.substr(0, key.size() - suffix.text.size());
    for (const auto& field : kFields) {
      if (field.name == base && field.kind == suffix.kind) return std::pair{&field, &suffix};
    }
  }
  return std::nullopt;
}

}  // namespace

RawParams parse_config(std::string_view text, std::string_view source_name) {
  RawParams raw;
  std::array<int, kFields.size()> seen_at{};
  std::string section;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(where(source_name, line_no) + "unterminated section header", line_no, "");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "atoms" && section != "cavity" && section != "mechanics" &&
          section != "pump") {
        throw ConfigError(where(source_name, line_no) + "unknown section [" + section + "]",
                          line_no, "");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where(source_name, line_no) + "expected `key = value`", line_no, "");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value_text = trim(line.substr(eq + 1));
    const std::string key_str(key);

    const auto resolved = resolve(key);
    if (!resolved) {
      throw ConfigError(where(source_name, line_no) + "unknown key or unit suffix `" + key_str + "`",
                        line_no, key_str);
    }
    const auto [field, suffix] = *resolved;
    if (section.empty()) {
      throw ConfigError(where(source_name, line_no) + "key `" + key_str + "` outside any section",
                        line_no, key_str);
    }
    if (field->section != section) {
      throw ConfigError(where(source_name, line_no) + "key `" + key_str + "` belongs in [" +
                            std::string(field->section) + "], found in [" + section + "]",
                        line_no, key_str);
    }

    const auto index = static_cast<std::size_t>(field - kFields.data());
    if (seen_at[index] != 0) {
      throw ConfigError(where(source_name, line_no) + "duplicate key `" + std::string(field->name) +
                            "` (first set on line " + std::to_string(seen_at[index]) + ")",
                        line_no, key_str);
    }

    double value = 0.0;
    const auto* first = value_text.data();
    const auto* last = first + value_text.size();
    const auto [end, ec] = std::from_chars(first, last, value);
    if (value_text.empty() || ec != std::errc{} || end != last) {
      throw ConfigError(where(source_name, line_no) + "cannot parse number `" +
                            std::string(value_text) + "` for key `" + key_str + "`",
                        line_no, key_str);
    }
    raw.*(field->member) = value * suffix->scale;
    seen_at[index] = line_no;
  }

  for (std::size_t i = 0; i < kFields.size(); ++i) {
    if (kFields[i].required && seen_at[i] == 0) {
      throw ConfigError(std::string(source_name) + ": missing required key `" +
                            std::string(kFields[i].name) + "_<unit>` in [" +
                            std::string(kFields[i].section) + "]",
                        0, std::string(kFields[i].name));
    }
  }

  try {
    validate(raw);
  } catch (const DomainError& e) {
    throw ConfigError(std::string(source_name) + ": " + e.what(), 0, "");
  }
  return raw;
}

RawParams load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string(), 0, "");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

std::string_view paper_preset_text() { return kPaperPresetText; }

RawParams paper_preset() { return parse_config(kPaperPresetText, "paper.cfg"); }

}  // namespace superlase
