#include "adnoise/units.hpp"

#include <cmath>
#include <string>

#include "adnoise/errors.hpp"

namespace adnoise::units {

void check_constants(const PhysicalConstants& c) {
  const double all[] = {c.hbar, c.bohr_radius, c.boltzmann, c.elementary_charge,
                        c.vacuum_permittivity, c.atomic_mass_unit, c.debye};
  for (double v : all) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw NumericalError("physical constant table contains a non-positive entry");
  }
  const double ea0_in_debye = c.elementary_charge * c.bohr_radius / c.debye;
  if (std::abs(ea0_in_debye - 2.5417) > 1e-4)
    throw NumericalError("constant table inconsistent: e*a0 = " +
                         std::to_string(ea0_in_debye) + " D, expected 2.5417 D");
}

EnergyUnit parse_energy_unit(std::string_view tag) {
  if (tag == "J") return EnergyUnit::joule;
  if (tag == "eV") return EnergyUnit::electronvolt;
  if (tag == "meV") return EnergyUnit::millielectronvolt;
  if (tag == "K") return EnergyUnit::kelvin;
  if (tag == "Hz") return EnergyUnit::hertz;
  throw ConfigError("unknown energy unit '" + std::string(tag) + "'");
}

LengthUnit parse_length_unit(std::string_view tag) {
  if (tag == "m") return LengthUnit::metre;
  if (tag == "A" || tag == "Angstrom" || tag == "Å") return LengthUnit::angstrom;
  if (tag == "a0") return LengthUnit::bohr;
  if (tag == "um" || tag == "µm" || tag == "μm") return LengthUnit::micrometre;
  throw ConfigError("unknown length unit '" + std::string(tag) + "'");
}

DipoleUnit parse_dipole_unit(std::string_view tag) {
  if (tag == "C*m" || tag == "Cm") return DipoleUnit::coulomb_metre;
  if (tag == "D") return DipoleUnit::debye;
  if (tag == "e*a0" || tag == "ea0") return DipoleUnit::e_bohr;
  throw ConfigError("unknown dipole unit '" + std::string(tag) + "'");
}

double si_factor(EnergyUnit unit) {
  switch (unit) {
    case EnergyUnit::joule: return 1.0;
    case EnergyUnit::electronvolt: return electronvolt;
    case EnergyUnit::millielectronvolt: return 1e-3 * electronvolt;
    case EnergyUnit::kelvin: return kB;
    case EnergyUnit::hertz: return 2.0 * kPi * hbar;
  }
  throw ConfigError("invalid energy unit");
}

double si_factor(LengthUnit unit) {
  switch (unit) {
    case LengthUnit::metre: return 1.0;
    case LengthUnit::angstrom: return angstrom;
    case LengthUnit::bohr: return a0;
    case LengthUnit::micrometre: return micrometre;
  }
  throw ConfigError("invalid length unit");
}

double si_factor(DipoleUnit unit) {
  switch (unit) {
    case DipoleUnit::coulomb_metre: return 1.0;
    case DipoleUnit::debye: return debye;
    case DipoleUnit::e_bohr: return e * a0;
  }
  throw ConfigError("invalid dipole unit");
}

namespace {
template <class Unit>
double convert(double value, Unit from, Unit to) {
  if (from == to) return value;
  return value * (si_factor(from) / si_factor(to));
}
}  // namespace

double convert_energy(double value, EnergyUnit from, EnergyUnit to) {
  return convert(value, from, to);
}
double convert_length(double value, LengthUnit from, LengthUnit to) {
  return convert(value, from, to);
}
double convert_dipole(double value, DipoleUnit from, DipoleUnit to) {
  return convert(value, from, to);
}

double convert_energy(double value, std::string_view from, std::string_view to) {
  return convert_energy(value, parse_energy_unit(from), parse_energy_unit(to));
}
double convert_length(double value, std::string_view from, std::string_view to) {
  return convert_length(value, parse_length_unit(from), parse_length_unit(to));
}
double convert_dipole(double value, std::string_view from, std::string_view to) {
  return convert_dipole(value, parse_dipole_unit(from), parse_dipole_unit(to));
}

}  // namespace adnoise::units
