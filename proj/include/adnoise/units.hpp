#pragma once

#include <string_view>

namespace adnoise::units {

// SI values (CODATA 2018 exact or recommended).  Everything in the library
// is computed in SI; these conversions are used only at input and output.
struct PhysicalConstants {
  double hbar;                 // J s
  double boltzmann;            // J/K
  double elementary_charge;    // C
  double vacuum_permittivity;  // F/m
  double bohr_radius;          // m
  double atomic_mass_unit;     // kg
  double debye;                // C m
};

inline constexpr PhysicalConstants kSI{
    1.054571817e-34, 1.380649e-23,   1.602176634e-19, 8.8541878128e-12,
    5.29177210903e-11, 1.66053906660e-27, 3.33564e-30,
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double hbar = kSI.hbar;
inline constexpr double kB = kSI.boltzmann;
inline constexpr double e = kSI.elementary_charge;
inline constexpr double eps0 = kSI.vacuum_permittivity;
inline constexpr double a0 = kSI.bohr_radius;
inline constexpr double amu = kSI.atomic_mass_unit;
inline constexpr double debye = kSI.debye;
inline constexpr double angstrom = 1e-10;
inline constexpr double micrometre = 1e-6;
inline constexpr double electronvolt = kSI.elementary_charge;

// 1/(4 pi eps0), the Coulomb constant.
inline constexpr double coulomb_constant = 1.0 / (4.0 * kPi * eps0);

/// Throws NumericalError if the constant table is internally inconsistent
/// (non-positive entries, or e*a0 not equal to 2.5417 D).
void check_constants(const PhysicalConstants& c = kSI);

enum class EnergyUnit { joule, electronvolt, millielectronvolt, kelvin, hertz };
enum class LengthUnit { metre, angstrom, bohr, micrometre };
enum class DipoleUnit { coulomb_metre, debye, e_bohr };

// Unit tags accepted by the parsers: "J", "eV", "meV", "K", "Hz";
// "m", "A", "a0", "um"; "C*m", "D", "e*a0".  Unknown tags throw ConfigError.
EnergyUnit parse_energy_unit(std::string_view tag);
LengthUnit parse_length_unit(std::string_view tag);
DipoleUnit parse_dipole_unit(std::string_view tag);

/// Size of one `unit` in SI.  The kelvin and hertz entries are the energy
/// equivalents k_B*T and hbar*2*pi*nu.
double si_factor(EnergyUnit unit);
double si_factor(LengthUnit unit);
double si_factor(DipoleUnit unit);

double convert_energy(double value, EnergyUnit from, EnergyUnit to);
double convert_length(double value, LengthUnit from, LengthUnit to);
double convert_dipole(double value, DipoleUnit from, DipoleUnit to);

double convert_energy(double value, std::string_view from, std::string_view to);
double convert_length(double value, std::string_view from, std::string_view to);
double convert_dipole(double value, std::string_view from, std::string_view to);

}  // namespace adnoise::units
