#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "adnoise/potential.hpp"

namespace adnoise::boundstates {

/// Uniform grid z_i = z_min + i*h, i = 0..n_points-1.
struct Grid {
  double z_min = 0.0;
  double z_max = 0.0;
  std::size_t n_points = 0;

  double spacing() const { return (z_max - z_min) / static_cast<double>(n_points - 1); }
  double at(std::size_t i) const { return z_min + static_cast<double>(i) * spacing(); }
  bool operator==(const Grid&) const = default;
};

void validate(const Grid& g);

/// Grid for the vibrational problem of `p`.
///
/// z_min sits on the repulsive wall where U = 10 U0.  The exp-3 wall is a
/// finite barrier (the -C3/z^3 term wins as z -> 0), so when the barrier top
/// is lower than 10 U0 the grid starts at the barrier top instead.  z_max is
/// the larger of 6 z0 and the point where |U| has dropped to 1e-4 U0.
Grid auto_grid(const potential::SurfacePotentialParams& p, std::size_t n_points);

inline constexpr std::size_t kDefaultPoints = 4000;
inline constexpr std::size_t kDefaultMaxStates = 64;

/// Bound states whose |psi(z_max)|^2 h is at or above this are not localized.
inline constexpr double kTailTolerance = 1e-10;
/// States above -kThresholdFraction*U0 are treated as continuum.
inline constexpr double kThresholdFraction = 1e-3;
/// The grid guarantees the tail condition below -kGuaranteedFraction*U0.
inline constexpr double kGuaranteedFraction = 1e-2;

struct SolveDiagnostics {
  std::size_t negative_eigenvalues = 0;  // all E < 0 returned by the eigensolver
  std::size_t discarded_threshold = 0;   // E >= -1e-3 U0
  std::size_t discarded_tail = 0;        // near threshold and not localized
  std::size_t truncated = 0;             // dropped by max_states
  double max_tail_weight = 0.0;          // over kept states
};

class BoundStateSet {
 public:
  BoundStateSet(potential::SurfacePotentialParams params, Grid grid,
                std::vector<double> energies, std::vector<std::vector<double>> wavefunctions,
                SolveDiagnostics diagnostics);

  const potential::SurfacePotentialParams& params() const { return params_; }
  const Grid& grid() const { return grid_; }
  std::size_t size() const { return energies_.size(); }
  const std::vector<double>& energies() const { return energies_; }
  double energy(std::size_t i) const { return energies_.at(i); }
  std::span<const double> wavefunction(std::size_t i) const { return wavefunctions_.at(i); }
  std::span<const double> z() const { return z_; }
  /// U'(z) sampled on the grid.
  std::span<const double> force_gradient() const { return dudz_; }
  const SolveDiagnostics& diagnostics() const { return diagnostics_; }

  /// Trapezoid integral of psi_i * g * psi_f with g given on the grid.
  double integrate(std::size_t i, std::size_t f, std::span<const double> g) const;

 private:
  potential::SurfacePotentialParams params_;
  Grid grid_;
  std::vector<double> energies_;
  std::vector<std::vector<double>> wavefunctions_;
  std::vector<double> z_;
  std::vector<double> dudz_;
  SolveDiagnostics diagnostics_;
};

/// Three-point finite-difference Hamiltonian -hbar^2/(2m) D2 + U on `grid`
/// with Dirichlet ends.  Returns the bound states (ascending energy), at most
/// `max_states` of them, each normalized and signed so that psi > 0 at its
/// first antinode from the wall.
///
/// Throws ModelError when fewer than two states survive, GridError when a
/// state below -0.01 U0 is not localized inside the grid.
BoundStateSet solve(const potential::SurfacePotentialParams& p, const Grid& grid,
                    std::size_t max_states = kDefaultMaxStates);

/// <f| dU/dz |i>
double matrix_element_dUdz(const BoundStateSet& s, std::size_t i, std::size_t f);

/// <i| g(z) |f>; NumericalError if g is not finite somewhere on the grid.
double expectation(const BoundStateSet& s, std::size_t i, std::size_t f,
                   const std::function<double(double)>& g);

}  // namespace adnoise::boundstates
