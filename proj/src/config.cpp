#include "adnoise/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "adnoise/errors.hpp"
#include "adnoise/units.hpp"

namespace adnoise::config {

namespace {

enum class Kind {
  energy,
  length,
  inverse_length,
  mass,
  volume,
  speed,
  density,
  frequency,
  charge,
  areal_density,
};

using UnitTable = std::vector<std::pair<std::string_view, double>>;

const UnitTable& units_for(Kind kind) {
  using namespace units;
  static const UnitTable energy{{"J", 1.0},
                                {"eV", electronvolt},
                                {"meV", 1e-3 * electronvolt},
                                {"K", kB},
                                {"Hz", 2.0 * kPi * hbar},
                                {"THz", 2.0 * kPi * hbar * 1e12}};
  static const UnitTable length{{"m", 1.0}, {"nm", 1e-9}, {"um", 1e-6}, {"A", angstrom},
                                {"a0", a0}};
  static const UnitTable inverse{{"1/m", 1.0}, {"1/nm", 1e9}, {"1/A", 1.0 / angstrom},
                                 {"1/a0", 1.0 / a0}};
  static const UnitTable mass{{"kg", 1.0}, {"amu", amu}, {"u", amu}};
  static const UnitTable volume{{"m^3", 1.0}, {"A^3", angstrom * angstrom * angstrom},
                                {"a0^3", a0 * a0 * a0}};
  static const UnitTable speed{{"m/s", 1.0}, {"km/s", 1e3}};
  static const UnitTable density{{"kg/m^3", 1.0}, {"g/cm^3", 1e3}};
  static const UnitTable frequency{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9},
                                   {"THz", 1e12}};
  static const UnitTable charge{{"C", 1.0}, {"e", e}};
  static const UnitTable areal{{"1/m^2", 1.0}, {"1/cm^2", 1e4}};
  switch (kind) {
    case Kind::energy: return energy;
    case Kind::length: return length;
    case Kind::inverse_length: return inverse;
    case Kind::mass: return mass;
    case Kind::volume: return volume;
    case Kind::speed: return speed;
    case Kind::density: return density;
    case Kind::frequency: return frequency;
    case Kind::charge: return charge;
    case Kind::areal_density: return areal;
  }
  throw ConfigError("invalid unit family");
}

std::string_view si_tag(Kind kind) { return units_for(kind).front().first; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits "<number> <unit>"; the unit may be empty.
std::pair<double, std::string_view> split_quantity(std::string_view text, std::string_view key) {
  text = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || !std::isfinite(value))
    throw ConfigError(std::string(key) + ": cannot parse number in '" + std::string(text) + "'");
  return {value, trim(std::string_view(res.ptr, text.data() + text.size() - res.ptr))};
}

std::string scalar(const YAML::Node& node, std::string_view key) {
  if (!node.IsScalar()) throw ConfigError(std::string(key) + ": expected a scalar value");
  return node.Scalar();
}

double quantity(const YAML::Node& node, Kind kind, std::string_view key) {
  const std::string text = scalar(node, key);
  const auto [value, unit] = split_quantity(text, key);
  if (unit.empty())
    throw ConfigError(std::string(key) + ": missing unit in '" + text + "'");
  for (const auto& [tag, factor] : units_for(kind))
    if (tag == unit) {
      if (!(value > 0.0)) throw ConfigError(std::string(key) + ": value must be positive");
      return value * factor;
    }
  throw ConfigError(std::string(key) + ": unknown unit '" + std::string(unit) + "'");
}

double number(const YAML::Node& node, std::string_view key) {
  const std::string text = scalar(node, key);
  const auto [value, unit] = split_quantity(text, key);
  if (!unit.empty())
    throw ConfigError(std::string(key) + ": dimensionless value must not carry a unit");
  if (!(value > 0.0)) throw ConfigError(std::string(key) + ": value must be positive");
  return value;
}

std::uint64_t integer(const YAML::Node& node, std::string_view key, bool allow_zero = false) {
  const std::string text = std::string(trim(scalar(node, key)));
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + text + "'");
  if (value == 0 && !allow_zero) throw ConfigError(std::string(key) + ": value must be positive");
  return value;
}

bool boolean(const YAML::Node& node, std::string_view key) {
  const std::string text = scalar(node, key);
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(std::string(key) + ": expected true or false");
}

void check_keys(const YAML::Node& map, std::string_view section,
                const std::set<std::string>& allowed) {
  if (!map.IsMap()) throw ConfigError(std::string(section) + ": expected a mapping");
  for (const auto& kv : map) {
    const std::string k = kv.first.as<std::string>();
    if (!allowed.count(k))
      throw ConfigError("unknown key '" + (section.empty() ? k : std::string(section) + "." + k) +
                        "'");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(double v, Kind kind) { return fmt(v) + " " + std::string(si_tag(kind)); }

std::string fmt(const Temperature& t) { return fmt(t.value) + (t.vibrational ? " hnu10" : " K"); }

}  // namespace

Temperature parse_temperature(std::string_view text, std::string_view key) {
  const auto [value, unit] = split_quantity(text, key);
  if (unit.empty()) throw ConfigError(std::string(key) + ": missing unit in '" + std::string(text) + "'");
  if (!(value > 0.0)) throw ConfigError(std::string(key) + ": temperature must be positive");
  if (unit == "K") return {value, false};
  if (unit == "hnu10") return {value, true};
  throw ConfigError(std::string(key) + ": unknown temperature unit '" + std::string(unit) +
                    "' (use K or hnu10)");
}

std::vector<Temperature> default_temperatures() {
  return {{0.2, true}, {0.5, true}, {1.0, true}, {2.0, true}, {3.0, true}, {6.0, true}};
}

void validate(const RunConfig& c) {
  potential::validate(c.potential);
  potential::validate(c.material);
  if (c.mass_model != "adatom" && c.mass_model != "reduced")
    throw ConfigError("potential.mass_model: expected 'adatom' or 'reduced'");
  if (c.solver.n_points < 200) throw ConfigError("solver.n_points: must be >= 200");
  if (c.solver.max_states < 2) throw ConfigError("solver.max_states: must be >= 2");
  if (!(c.image_factor > 0.0)) throw ConfigError("dipole.image_factor: must be positive");
  const SpectrumConfig& s = c.spectrum;
  if (s.temperatures.empty()) throw ConfigError("spectrum.temperatures: list is empty");
  for (const Temperature& t : s.temperatures)
    if (!(t.value > 0.0)) throw ConfigError("spectrum.temperatures: must be positive");
  if (!(s.omega_min > 0.0) || !(s.omega_max > s.omega_min))
    throw ConfigError("spectrum.omega_max: must exceed omega_min > 0");
  if (s.points_per_decade < 1) throw ConfigError("spectrum.points_per_decade: must be >= 1");
  if (!(s.fit_low > 0.0) || !(s.fit_high > s.fit_low))
    throw ConfigError("spectrum.fit_high: must exceed fit_low > 0");
  if (!(s.arrhenius_omega > 0.0)) throw ConfigError("spectrum.arrhenius_omega: must be positive");
  if (s.sweep_points < 4) throw ConfigError("spectrum.sweep_points: must be >= 4");
  if (s.sweep_min.vibrational != s.sweep_max.vibrational || !(s.sweep_max.value > s.sweep_min.value))
    throw ConfigError("spectrum.sweep_max: must exceed sweep_min in the same unit");
  const TrapSettings& t = c.trap;
  if (!(t.distance > 0.0)) throw ConfigError("trap.distance: must be positive");
  if (!(t.frequency > 0.0)) throw ConfigError("trap.frequency: must be positive");
  if (!(t.ion_mass > 0.0)) throw ConfigError("trap.ion_mass: must be positive");
  if (!(t.charge > 0.0)) throw ConfigError("trap.charge: must be positive");
  if (!(t.coverage > 0.0)) throw ConfigError("trap.coverage: must be positive");
  const double norm = std::sqrt(t.axis[0] * t.axis[0] + t.axis[1] * t.axis[1] + t.axis[2] * t.axis[2]);
  if (!(std::abs(norm - 1.0) <= 1e-12)) throw ConfigError("trap.axis: must be a unit vector");
  const MonteCarloConfig& m = c.montecarlo;
  if (m.n_dipoles < 1) throw ConfigError("montecarlo.n_dipoles: must be positive");
  if (!(m.extent > 0.0)) throw ConfigError("montecarlo.extent: must be positive");
  if (!(m.min_spacing > 0.0)) throw ConfigError("montecarlo.min_spacing: must be positive");
  if (m.n_seeds < 1) throw ConfigError("montecarlo.n_seeds: must be positive");
  if (m.distances.size() < 3) throw ConfigError("montecarlo.distances: need at least 3 values");
  for (double d : m.distances)
    if (!(d > 0.0)) throw ConfigError("montecarlo.distances: must be positive");
  if (c.output.empty()) throw ConfigError("output.directory: must not be empty");
}

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& ex) {
    throw ConfigError(std::string("malformed configuration: ") + ex.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  check_keys(root, "", {"preset", "potential", "material", "solver", "dipole", "spectrum", "trap",
                        "montecarlo", "output"});

  RunConfig c;
  if (root["preset"]) c.preset = scalar(root["preset"], "preset");
  potential::Preset p = potential::preset(c.preset);
  c.potential = p.params;
  c.material = p.material;
  c.trap.ion_mass = 40.0 * units::amu;
  c.trap.charge = units::e;
  c.spectrum.temperatures = default_temperatures();

  if (const YAML::Node n = root["material"]) {
    check_keys(n, "material",
               {"preset", "name", "speed_of_sound", "density", "debye_frequency", "atomic_mass"});
    if (n["preset"]) c.material = potential::material_preset(scalar(n["preset"], "material.preset"));
    if (n["name"]) c.material.name = scalar(n["name"], "material.name");
    if (n["speed_of_sound"]) c.material.speed_of_sound = quantity(n["speed_of_sound"], Kind::speed, "material.speed_of_sound");
    if (n["density"]) c.material.density = quantity(n["density"], Kind::density, "material.density");
    if (n["debye_frequency"]) c.material.debye_frequency = quantity(n["debye_frequency"], Kind::frequency, "material.debye_frequency");
    if (n["atomic_mass"]) c.material.atomic_mass = quantity(n["atomic_mass"], Kind::mass, "material.atomic_mass");
  }
  if (const YAML::Node n = root["potential"]) {
    check_keys(n, "potential", {"name", "depth", "equilibrium", "inverse_range", "mass",
                                "polarizability", "mass_model"});
    if (n["name"]) c.potential.name = scalar(n["name"], "potential.name");
    if (n["depth"]) c.potential.depth = quantity(n["depth"], Kind::energy, "potential.depth");
    if (n["equilibrium"]) c.potential.equilibrium = quantity(n["equilibrium"], Kind::length, "potential.equilibrium");
    if (n["inverse_range"]) c.potential.inverse_range = quantity(n["inverse_range"], Kind::inverse_length, "potential.inverse_range");
    if (n["mass"]) c.potential.mass = quantity(n["mass"], Kind::mass, "potential.mass");
    if (n["polarizability"]) c.potential.polarizability = quantity(n["polarizability"], Kind::volume, "potential.polarizability");
    if (n["mass_model"]) c.mass_model = scalar(n["mass_model"], "potential.mass_model");
  }
  if (std::isnan(c.potential.inverse_range))
    throw ConfigError("potential.inverse_range: preset '" + c.preset +
                      "' has no published value; supply one");
  if (const YAML::Node n = root["solver"]) {
    check_keys(n, "solver", {"n_points", "max_states"});
    if (n["n_points"]) c.solver.n_points = integer(n["n_points"], "solver.n_points");
    if (n["max_states"]) c.solver.max_states = integer(n["max_states"], "solver.max_states");
  }
  if (const YAML::Node n = root["dipole"]) {
    check_keys(n, "dipole", {"image_factor"});
    if (n["image_factor"]) c.image_factor = number(n["image_factor"], "dipole.image_factor");
  }
  if (const YAML::Node n = root["spectrum"]) {
    check_keys(n, "spectrum", {"temperatures", "omega_min", "omega_max", "points_per_decade",
                               "debye_cutoff", "fit_low", "fit_high", "arrhenius_omega",
                               "sweep_min", "sweep_max", "sweep_points"});
    SpectrumConfig& s = c.spectrum;
    if (const YAML::Node t = n["temperatures"]) {
      if (!t.IsSequence()) throw ConfigError("spectrum.temperatures: expected a list");
      s.temperatures.clear();
      for (const auto& item : t)
        s.temperatures.push_back(parse_temperature(scalar(item, "spectrum.temperatures"), "spectrum.temperatures"));
    }
    if (n["omega_min"]) s.omega_min = number(n["omega_min"], "spectrum.omega_min");
    if (n["omega_max"]) s.omega_max = number(n["omega_max"], "spectrum.omega_max");
    if (n["points_per_decade"]) s.points_per_decade = static_cast<int>(integer(n["points_per_decade"], "spectrum.points_per_decade"));
    if (n["debye_cutoff"]) s.debye_cutoff = boolean(n["debye_cutoff"], "spectrum.debye_cutoff");
    if (n["fit_low"]) s.fit_low = number(n["fit_low"], "spectrum.fit_low");
    if (n["fit_high"]) s.fit_high = number(n["fit_high"], "spectrum.fit_high");
    if (n["arrhenius_omega"]) s.arrhenius_omega = number(n["arrhenius_omega"], "spectrum.arrhenius_omega");
    if (n["sweep_min"]) s.sweep_min = parse_temperature(scalar(n["sweep_min"], "spectrum.sweep_min"), "spectrum.sweep_min");
    if (n["sweep_max"]) s.sweep_max = parse_temperature(scalar(n["sweep_max"], "spectrum.sweep_max"), "spectrum.sweep_max");
    if (n["sweep_points"]) s.sweep_points = static_cast<int>(integer(n["sweep_points"], "spectrum.sweep_points"));
  }
  if (const YAML::Node n = root["trap"]) {
    check_keys(n, "trap", {"distance", "frequency", "ion_mass", "charge", "axis", "coverage"});
    TrapSettings& t = c.trap;
    if (n["distance"]) t.distance = quantity(n["distance"], Kind::length, "trap.distance");
    if (n["frequency"]) t.frequency = quantity(n["frequency"], Kind::frequency, "trap.frequency");
    if (n["ion_mass"]) t.ion_mass = quantity(n["ion_mass"], Kind::mass, "trap.ion_mass");
    if (n["charge"]) t.charge = quantity(n["charge"], Kind::charge, "trap.charge");
    if (n["coverage"]) t.coverage = quantity(n["coverage"], Kind::areal_density, "trap.coverage");
    if (const YAML::Node a = n["axis"]) {
      if (!a.IsSequence() || a.size() != 3) throw ConfigError("trap.axis: expected [x, y, z]");
      for (std::size_t i = 0; i < 3; ++i) {
        const auto [v, unit] = split_quantity(scalar(a[i], "trap.axis"), "trap.axis");
        if (!unit.empty()) throw ConfigError("trap.axis: components are dimensionless");
        t.axis[i] = v;
      }
    }
  }
  if (const YAML::Node n = root["montecarlo"]) {
    check_keys(n, "montecarlo", {"n_dipoles", "extent", "min_spacing", "n_seeds", "seed", "distances"});
    MonteCarloConfig& m = c.montecarlo;
    if (n["n_dipoles"]) m.n_dipoles = integer(n["n_dipoles"], "montecarlo.n_dipoles");
    if (n["extent"]) m.extent = number(n["extent"], "montecarlo.extent");
    if (n["min_spacing"]) m.min_spacing = quantity(n["min_spacing"], Kind::length, "montecarlo.min_spacing");
    if (n["n_seeds"]) m.n_seeds = integer(n["n_seeds"], "montecarlo.n_seeds");
    if (n["seed"]) m.seed = integer(n["seed"], "montecarlo.seed", true);
    if (const YAML::Node d = n["distances"]) {
      if (!d.IsSequence()) throw ConfigError("montecarlo.distances: expected a list");
      m.distances.clear();
      for (const auto& item : d) m.distances.push_back(number(item, "montecarlo.distances"));
    }
  }
  if (const YAML::Node n = root["output"]) {
    check_keys(n, "output", {"directory"});
    if (n["directory"]) c.output = scalar(n["directory"], "output.directory");
  }
  validate(c);
  return c;
}

RunConfig parse_config(std::string_view text, const std::string& preset_override) {
  if (preset_override.empty()) return parse_config(text);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& ex) {
    throw ConfigError(std::string("malformed configuration: ") + ex.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("configuration must be a mapping");
  root["preset"] = preset_override;
  YAML::Emitter out;
  out << root;
  return parse_config(out.c_str());
}

RunConfig load_config(const std::string& path, const std::string& preset_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), preset_override);
}

std::string serialize(const RunConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "preset" << YAML::Value << c.preset;
  out << YAML::Key << "potential" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.potential.name;
  out << YAML::Key << "depth" << YAML::Value << fmt(c.potential.depth, Kind::energy);
  out << YAML::Key << "equilibrium" << YAML::Value << fmt(c.potential.equilibrium, Kind::length);
  out << YAML::Key << "inverse_range" << YAML::Value << fmt(c.potential.inverse_range, Kind::inverse_length);
  out << YAML::Key << "mass" << YAML::Value << fmt(c.potential.mass, Kind::mass);
  out << YAML::Key << "polarizability" << YAML::Value << fmt(c.potential.polarizability, Kind::volume);
  out << YAML::Key << "mass_model" << YAML::Value << c.mass_model;
  out << YAML::EndMap;
  out << YAML::Key << "material" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.material.name;
  out << YAML::Key << "speed_of_sound" << YAML::Value << fmt(c.material.speed_of_sound, Kind::speed);
  out << YAML::Key << "density" << YAML::Value << fmt(c.material.density, Kind::density);
  out << YAML::Key << "debye_frequency" << YAML::Value << fmt(c.material.debye_frequency, Kind::frequency);
  out << YAML::Key << "atomic_mass" << YAML::Value << fmt(c.material.atomic_mass, Kind::mass);
  out << YAML::EndMap;
  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_points" << YAML::Value << c.solver.n_points;
  out << YAML::Key << "max_states" << YAML::Value << c.solver.max_states;
  out << YAML::EndMap;
  out << YAML::Key << "dipole" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "image_factor" << YAML::Value << fmt(c.image_factor);
  out << YAML::EndMap;
  const SpectrumConfig& s = c.spectrum;
  out << YAML::Key << "spectrum" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "temperatures" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const Temperature& t : s.temperatures) out << fmt(t);
  out << YAML::EndSeq;
  out << YAML::Key << "omega_min" << YAML::Value << fmt(s.omega_min);
  out << YAML::Key << "omega_max" << YAML::Value << fmt(s.omega_max);
  out << YAML::Key << "points_per_decade" << YAML::Value << s.points_per_decade;
  out << YAML::Key << "debye_cutoff" << YAML::Value << (s.debye_cutoff ? "true" : "false");
  out << YAML::Key << "fit_low" << YAML::Value << fmt(s.fit_low);
  out << YAML::Key << "fit_high" << YAML::Value << fmt(s.fit_high);
  out << YAML::Key << "arrhenius_omega" << YAML::Value << fmt(s.arrhenius_omega);
  out << YAML::Key << "sweep_min" << YAML::Value << fmt(s.sweep_min);
  out << YAML::Key << "sweep_max" << YAML::Value << fmt(s.sweep_max);
  out << YAML::Key << "sweep_points" << YAML::Value << s.sweep_points;
  out << YAML::EndMap;
  const TrapSettings& t = c.trap;
  out << YAML::Key << "trap" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "distance" << YAML::Value << fmt(t.distance, Kind::length);
  out << YAML::Key << "frequency" << YAML::Value << fmt(t.frequency, Kind::frequency);
  out << YAML::Key << "ion_mass" << YAML::Value << fmt(t.ion_mass, Kind::mass);
  out << YAML::Key << "charge" << YAML::Value << fmt(t.charge, Kind::charge);
  out << YAML::Key << "axis" << YAML::Value << YAML::Flow << YAML::BeginSeq << fmt(t.axis[0])
      << fmt(t.axis[1]) << fmt(t.axis[2]) << YAML::EndSeq;
  out << YAML::Key << "coverage" << YAML::Value << fmt(t.coverage, Kind::areal_density);
  out << YAML::EndMap;
  const MonteCarloConfig& m = c.montecarlo;
  out << YAML::Key << "montecarlo" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_dipoles" << YAML::Value << m.n_dipoles;
  out << YAML::Key << "extent" << YAML::Value << fmt(m.extent);
  out << YAML::Key << "min_spacing" << YAML::Value << fmt(m.min_spacing, Kind::length);
  out << YAML::Key << "n_seeds" << YAML::Value << m.n_seeds;
  out << YAML::Key << "seed" << YAML::Value << m.seed;
  out << YAML::Key << "distances" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double d : m.distances) out << fmt(d);
  out << YAML::EndSeq;
  out << YAML::EndMap;
  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "directory" << YAML::Value << c.output;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace adnoise::config
