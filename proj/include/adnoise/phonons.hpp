#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "adnoise/boundstates.hpp"
#include "adnoise/potential.hpp"

namespace adnoise::phonons {

/// Bose-Einstein occupation of a phonon mode of angular frequency
/// `delta_omega` at temperature T (kelvin).  Zero at T = 0.
double bose_occupation(double delta_omega, double temperature);

struct RateOptions {
  // Zero both directions of any transition with delta_omega/2pi above the
  // material's Debye frequency.
  bool debye_cutoff = true;
};

struct TransitionRate {
  double rate = 0.0;  // 1/s
  bool cutoff = false;
};

/// One-phonon golden-rule rate between bound states i and f at temperature T:
///   Gamma = dw/(2 pi hbar v^3 rho) |<f|U'|i>|^2 (n(dw) + 1)   (emission, E_i > E_f)
///   Gamma = dw/(2 pi hbar v^3 rho) |<f|U'|i>|^2  n(dw)        (absorption)
/// ModelError for i == f or degenerate levels.
TransitionRate transition_rate(const boundstates::BoundStateSet& states,
                               const potential::BulkMaterial& material, std::size_t i,
                               std::size_t f, double temperature, RateOptions options = {});

/// Same, from a precomputed coupling <f|U'|i>.
TransitionRate transition_rate(double energy_i, double energy_f, double coupling,
                               const potential::BulkMaterial& material, double temperature,
                               RateOptions options = {});

/// Harmonic-well estimate of the T = 0 decay rate 1 -> 0:
///   Gamma0 = nu10^4 m / (4 pi v^3 rho),  nu10 in rad/s.
double gamma0_harmonic(const potential::SurfacePotentialParams& p,
                       const potential::BulkMaterial& material, double nu10);

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Rates Gamma(i -> f) and the master-equation generator
///   M(i, j) = Gamma(j -> i) for i != j,  M(i, i) = -sum_j Gamma(i -> j),
/// so d<rho>/dt = M <rho>.  Immutable once built.
class RateMatrix {
 public:
  RateMatrix(Eigen::MatrixXd gamma, std::vector<double> energies, double temperature,
             BoolMatrix cutoff_mask);
  /// Unmasked matrix from raw rates (tests and hand-built models).
  RateMatrix(Eigen::MatrixXd gamma, std::vector<double> energies, double temperature);

  std::size_t size() const { return energies_.size(); }
  const Eigen::MatrixXd& gamma() const { return gamma_; }
  const Eigen::MatrixXd& generator() const { return generator_; }
  const std::vector<double>& energies() const { return energies_; }
  double temperature() const { return temperature_; }
  const BoolMatrix& cutoff_mask() const { return mask_; }

  /// Pairs (i < f) whose transitions were zeroed by the Debye cutoff.
  std::vector<std::pair<std::size_t, std::size_t>> masked_pairs() const;
  /// True when the undirected graph of nonzero couplings spans every state.
  bool connected() const;

 private:
  Eigen::MatrixXd gamma_;
  Eigen::MatrixXd generator_;
  std::vector<double> energies_;
  double temperature_;
  BoolMatrix mask_;
  // Nonzero coupling in either direction, independent of temperature.
  BoolMatrix linked_;
};

/// <f|U'|i> for every pair of bound states.
Eigen::MatrixXd coupling_matrix(const boundstates::BoundStateSet& states);

/// Assemble every pairwise rate.  ModelError when the cutoff (or vanishing
/// couplings) leave the transition graph disconnected.
RateMatrix build_rate_matrix(const boundstates::BoundStateSet& states,
                             const potential::BulkMaterial& material, double temperature,
                             RateOptions options = {});
RateMatrix build_rate_matrix(const boundstates::BoundStateSet& states,
                             const Eigen::MatrixXd& couplings,
                             const potential::BulkMaterial& material, double temperature,
                             RateOptions options = {});

/// Null vector of the generator, normalized to unit sum.  Computed by state
/// reduction (Grassmann-Taksar-Heyman), which involves no subtractions and so
/// keeps relative accuracy even for populations of order e^-40.  ModelError
/// when the zero eigenvalue is not simple.
Eigen::VectorXd stationary_distribution(const RateMatrix& r);

/// Normalized exp(-E_i / kT); (1, 0, ...) at T = 0.
Eigen::VectorXd boltzmann_weights(const std::vector<double>& energies, double temperature);

}  // namespace adnoise::phonons
