#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adnoise/potential.hpp"

namespace adnoise::config {

/// A temperature given either in kelvin or in units of hbar nu10 / k_B.
struct Temperature {
  double value = 0.0;
  bool vibrational = false;  // true: value is k_B T / (hbar nu10)

  bool operator==(const Temperature&) const = default;
};

struct SolverConfig {
  std::size_t n_points = 4000;
  std::size_t max_states = 64;
  bool operator==(const SolverConfig&) const = default;
};

struct SpectrumConfig {
  std::vector<Temperature> temperatures;
  double omega_min = 1e-3;  // units of Gamma0
  double omega_max = 1e4;
  int points_per_decade = 60;
  bool debye_cutoff = true;
  double fit_low = 1.0;  // 1/f window, units of omega_c
  double fit_high = 10.0;
  double arrhenius_omega = 20.0;  // units of Gamma0
  Temperature sweep_min{0.1, true};
  Temperature sweep_max{6.0, true};
  int sweep_points = 60;
  bool operator==(const SpectrumConfig&) const = default;
};

struct TrapSettings {
  double distance = 10e-6;      // m
  double frequency = 1e6;       // ordinary frequency, Hz
  double ion_mass = 0.0;        // kg
  double charge = 0.0;          // C
  std::array<double, 3> axis{0.0, 0.0, 1.0};
  double coverage = 1e18;       // 1/m^2
  bool operator==(const TrapSettings&) const = default;
};

struct MonteCarloConfig {
  std::size_t n_dipoles = 100;
  double extent = 100.0;        // units of min_spacing
  double min_spacing = 1e-6;    // d0, m
  std::size_t n_seeds = 2000;
  std::uint64_t seed = 1;
  std::vector<double> distances{3, 4, 5, 6, 7, 8, 9, 10};  // units of d0
  bool operator==(const MonteCarloConfig&) const = default;
};

/// Fully resolved run configuration; all physical values SI.
struct RunConfig {
  std::string preset = "Ne-Au";
  potential::SurfacePotentialParams potential;  // adatom mass in potential.mass
  potential::BulkMaterial material;
  std::string mass_model = "adatom";            // or "reduced"
  SolverConfig solver;
  double image_factor = 1.0;
  SpectrumConfig spectrum;
  TrapSettings trap;
  MonteCarloConfig montecarlo;
  std::string output = "adnoise-out";

  bool operator==(const RunConfig&) const = default;
};

/// Default temperatures, in units of hbar nu10 / k_B.
std::vector<Temperature> default_temperatures();

/// Parse a YAML document.  Physical values are strings "<number> <unit>".
/// ConfigError naming the key on unknown keys, missing or unknown units,
/// and non-positive values.
RunConfig parse_config(std::string_view text);
/// Same, with the top-level preset replaced before the sections are applied.
RunConfig parse_config(std::string_view text, const std::string& preset_override);
RunConfig load_config(const std::string& path, const std::string& preset_override = "");

/// YAML listing every field in SI units; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& c);

void validate(const RunConfig& c);

/// "40 K" or "2 hnu10".  ConfigError naming `key` otherwise.
Temperature parse_temperature(std::string_view text, std::string_view key);

}  // namespace adnoise::config
