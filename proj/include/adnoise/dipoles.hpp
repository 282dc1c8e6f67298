#pragma once

#include <vector>

#include "adnoise/boundstates.hpp"

namespace adnoise::dipoles {

/// Vibrationally averaged dipole mu_i = image_factor * <i|P(z)|i>, one per
/// bound state, in C*m.
struct DipoleLadder {
  std::vector<double> mu;
  double image_factor = 1.0;
  double polarizability = 0.0;  // m^3
};

/// Surface-normal dipole induced on an atom of polarizability `alpha` (m^3)
/// whose nucleus sits a distance z from the conductor:
///   P(z) = 0.47 e a0^(1/2) alpha^(3/2) / z^4.
/// For hydrogen (alpha = 4.5 a0^3) this is 4.49 e a0^5 / z^4.
double induced_dipole(double alpha, double z);

inline constexpr double kInducedDipoleCoefficient = 0.47;

DipoleLadder dipole_ladder(const boundstates::BoundStateSet& states, double alpha,
                           double image_factor = 1.0);

/// Grid index where |psi_i|^2 P(z) peaks; used to check the z^-4 kernel is
/// not dominated by the wall end of the grid.
std::size_t integrand_peak_index(const boundstates::BoundStateSet& states, std::size_t i,
                                 double alpha);

}  // namespace adnoise::dipoles
