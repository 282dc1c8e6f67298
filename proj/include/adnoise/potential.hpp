#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace adnoise::potential {

/// Parameters of the exp-3 adatom-surface well
///
///   U(z) = b/(b-3) * U0 * [ (3/b) exp(b (1 - z/z0)) - (z0/z)^3 ],  b = beta*z0,
///
/// together with the adatom's mass and static polarizability.  All SI.
struct SurfacePotentialParams {
  std::string name;
  double depth = 0.0;          // U0 [J]
  double equilibrium = 0.0;    // z0 [m]
  double inverse_range = 0.0;  // beta [1/m]
  double mass = 0.0;           // adatom (or reduced) mass [kg]
  double polarizability = 0.0; // alpha, volume [m^3]

  double reduced_range() const { return inverse_range * equilibrium; }
  bool operator==(const SurfacePotentialParams&) const = default;
};

struct BulkMaterial {
  std::string name;
  double speed_of_sound = 0.0;   // v [m/s], averaged over polarizations
  double density = 0.0;          // rho [kg/m^3]
  double debye_frequency = 0.0;  // nu_D [Hz], ordinary frequency
  double atomic_mass = 0.0;      // mass of one lattice atom [kg]

  bool operator==(const BulkMaterial&) const = default;
};

/// Throws ConfigError for non-positive or non-finite fields, and
/// DomainError when beta*z0 <= 4.
void validate(const SurfacePotentialParams& p);
void validate(const BulkMaterial& m);

double evaluate(const SurfacePotentialParams& p, double z);
/// dU/dz, closed form.
double derivative(const SurfacePotentialParams& p, double z);
double second_derivative(const SurfacePotentialParams& p, double z);

/// Coefficient of the long-range -C3/z^3 tail.  Requires beta*z0 > 3.
double c3(const SurfacePotentialParams& p);

/// Small-oscillation angular frequency about z0 [rad/s].  Requires beta*z0 > 4.
double harmonic_frequency(const SurfacePotentialParams& p);

/// round(U0 / (hbar * harmonic_frequency)), at least 1.
int bound_state_count_estimate(const SurfacePotentialParams& p);

/// The exp-3 form diverges to -infinity as z -> 0: the repulsive wall is a
/// finite barrier with its top somewhere in (0, z0).  Everything physical
/// lives on the z > position side of it.
struct InnerBarrier {
  double position;  // [m]
  double height;    // U at the barrier top [J]
};
InnerBarrier inner_barrier(const SurfacePotentialParams& p);

/// Outermost z < z0 with U(z) = level, searched between the barrier top and
/// z0.  Requires inner_barrier(p).height >= level > -U0.
double wall_crossing(const SurfacePotentialParams& p, double level);

double reduced_mass(double adatom_mass, double surface_atom_mass);

/// Named adsorption systems.  "K-surface" has no published repulsion range:
/// its inverse_range is NaN and beta_required is set, so the caller must
/// supply one before validate() will accept it.
struct Preset {
  SurfacePotentialParams params;
  BulkMaterial material;
  bool beta_required = false;
};

Preset preset(std::string_view name);
BulkMaterial material_preset(std::string_view name);
std::vector<std::string> preset_names();

/// Alternative Ne-Au parameters quoted in prose form (z0 = 3.1 A,
/// beta = 1.86 1/A).  The "Ne-Au" preset uses the 6.05 a0 / 0.95 1/a0 set that
/// the plotted curves are computed from; this one is kept for comparison.
SurfacePotentialParams ne_au_text_variant();

}  // namespace adnoise::potential
