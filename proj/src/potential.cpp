#include "adnoise/potential.hpp"

#include <cmath>
#include <limits>

#include "adnoise/errors.hpp"
#include "adnoise/units.hpp"

namespace adnoise::potential {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string("surface potential: ") + what +
                      " must be positive and finite");
}

void require_z(double z) {
  if (!(z > 0.0)) throw DomainError("surface potential evaluated at z <= 0");
}

// b/(b-3) * U0
double prefactor(const SurfacePotentialParams& p) {
  const double b = p.reduced_range();
  return b / (b - 3.0) * p.depth;
}

}  // namespace

void validate(const SurfacePotentialParams& p) {
  require_positive(p.depth, "U0");
  require_positive(p.equilibrium, "z0");
  if (std::isnan(p.inverse_range))
    throw ConfigError("surface potential '" + p.name +
                      "': beta (inverse repulsion range) must be supplied");
  require_positive(p.inverse_range, "beta");
  require_positive(p.mass, "mass");
  require_positive(p.polarizability, "polarizability");
  if (!(p.reduced_range() > 4.0))
    throw DomainError("surface potential '" + p.name +
                      "': beta*z0 must exceed 4 for a real harmonic frequency");
}

void validate(const BulkMaterial& m) {
  const double all[] = {m.speed_of_sound, m.density, m.debye_frequency};
  for (double v : all) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError("bulk material '" + m.name + "': fields must be positive");
  }
}

double evaluate(const SurfacePotentialParams& p, double z) {
  require_z(z);
  const double b = p.reduced_range();
  const double s = p.equilibrium / z;
  return prefactor(p) * (3.0 / b * std::exp(b * (1.0 - z / p.equilibrium)) - s * s * s);
}

double derivative(const SurfacePotentialParams& p, double z) {
  require_z(z);
  const double b = p.reduced_range();
  const double z0 = p.equilibrium;
  const double s = z0 / z;
  return prefactor(p) * 3.0 / z0 * (s * s * s * s - std::exp(b * (1.0 - z / z0)));
}

double second_derivative(const SurfacePotentialParams& p, double z) {
  require_z(z);
  const double b = p.reduced_range();
  const double z0 = p.equilibrium;
  const double s = z0 / z;
  return prefactor(p) * 3.0 / (z0 * z0) *
         (b * std::exp(b * (1.0 - z / z0)) - 4.0 * s * s * s * s * s);
}

double c3(const SurfacePotentialParams& p) {
  const double b = p.reduced_range();
  if (!(b > 3.0)) throw DomainError("C3 requires beta*z0 > 3");
  const double z0 = p.equilibrium;
  return b * z0 * z0 * z0 * p.depth / (b - 3.0);
}

double harmonic_frequency(const SurfacePotentialParams& p) {
  const double b = p.reduced_range();
  if (!(b > 4.0)) throw DomainError("harmonic frequency requires beta*z0 > 4");
  const double z0 = p.equilibrium;
  return std::sqrt(p.depth / (p.mass * z0 * z0) * 3.0 * (b * b - 4.0 * b) / (b - 3.0));
}

int bound_state_count_estimate(const SurfacePotentialParams& p) {
  const double n = std::round(p.depth / (units::hbar * harmonic_frequency(p)));
  return n < 1.0 ? 1 : static_cast<int>(n);
}

InnerBarrier inner_barrier(const SurfacePotentialParams& p) {
  // U' > 0 below the barrier top and U' < 0 between it and z0.
  const double z0 = p.equilibrium;
  double lo = 1e-6 * z0;
  double hi = z0 * (1.0 - 1e-9);
  if (derivative(p, hi) >= 0.0) throw DomainError("no repulsive wall below z0");
  while (derivative(p, lo) <= 0.0) {
    lo *= 0.5;
    if (lo < 1e-12 * z0) throw DomainError("inner barrier not found");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * z0; ++it) {
    const double mid = 0.5 * (lo + hi);
    (derivative(p, mid) > 0.0 ? lo : hi) = mid;
  }
  const double z = 0.5 * (lo + hi);
  return {z, evaluate(p, z)};
}

double wall_crossing(const SurfacePotentialParams& p, double level) {
  const InnerBarrier top = inner_barrier(p);
  if (level > top.height || level <= -p.depth)
    throw DomainError("wall_crossing: level outside (-U0, barrier height]");
  // U decreases monotonically from the barrier top to z0.
  double lo = top.position;
  double hi = p.equilibrium;
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * p.equilibrium; ++it) {
    const double mid = 0.5 * (lo + hi);
    (evaluate(p, mid) >= level ? lo : hi) = mid;
  }
  return lo;
}

double reduced_mass(double adatom_mass, double surface_atom_mass) {
  return adatom_mass * surface_atom_mass / (adatom_mass + surface_atom_mass);
}

BulkMaterial material_preset(std::string_view name) {
  if (name == "Au") {
    return {"Au", 3962.0, 19.3e3, 3.6e12, 196.966570 * units::amu};
  }
  throw ConfigError("unknown material preset '" + std::string(name) + "'");
}

Preset preset(std::string_view name) {
  using namespace units;
  const BulkMaterial au = material_preset("Au");
  if (name == "H-Au") {
    return {{"H-Au", 2.0 * electronvolt, 1.6 * angstrom, 3.91 / angstrom, 1.0 * amu,
             4.5 * a0 * a0 * a0},
            au,
            false};
  }
  if (name == "Ne-Au") {
    return {{"Ne-Au", 12e-3 * electronvolt, 6.05 * a0, 0.95 / a0, 20.0 * amu,
             0.36 * angstrom * angstrom * angstrom},
            au,
            false};
  }
  if (name == "K-surface") {
    // Static polarizability of atomic potassium, 290.6 a0^3 (about 43 A^3).
    return {{"K-surface", 1.79 * electronvolt, 2.0 * angstrom,
             std::numeric_limits<double>::quiet_NaN(), 39.0 * amu, 290.6 * a0 * a0 * a0},
            au,
            true};
  }
  throw ConfigError("unknown preset '" + std::string(name) +
                    "' (expected H-Au, Ne-Au or K-surface)");
}

std::vector<std::string> preset_names() { return {"H-Au", "Ne-Au", "K-surface"}; }

SurfacePotentialParams ne_au_text_variant() {
  using namespace units;
  SurfacePotentialParams p = preset("Ne-Au").params;
  p.name = "Ne-Au (text)";
  p.equilibrium = 3.1 * angstrom;
  p.inverse_range = 1.86 / angstrom;
  return p;
}

}  // namespace adnoise::potential
