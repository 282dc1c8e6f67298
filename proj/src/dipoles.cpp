#include "adnoise/dipoles.hpp"

#include <cmath>

#include "adnoise/errors.hpp"
#include "adnoise/units.hpp"

namespace adnoise::dipoles {

double induced_dipole(double alpha, double z) {
  if (!(z > 0.0)) throw DomainError("induced_dipole: z must be positive");
  if (alpha < 0.0) throw DomainError("induced_dipole: polarizability must be >= 0");
  const double z2 = z * z;
  return kInducedDipoleCoefficient * units::e * std::sqrt(units::a0) * alpha *
         std::sqrt(alpha) / (z2 * z2);
}

namespace {
std::vector<double> kernel_on_grid(const boundstates::BoundStateSet& states, double alpha) {
  std::vector<double> g(states.z().size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = induced_dipole(alpha, states.z()[k]);
  return g;
}
}  // namespace

DipoleLadder dipole_ladder(const boundstates::BoundStateSet& states, double alpha,
                           double image_factor) {
  if (alpha < 0.0) throw DomainError("dipole_ladder: polarizability must be >= 0");
  if (!(image_factor > 0.0)) throw DomainError("dipole_ladder: image factor must be > 0");
  const std::vector<double> g = kernel_on_grid(states, alpha);
  DipoleLadder ladder;
  ladder.image_factor = image_factor;
  ladder.polarizability = alpha;
  ladder.mu.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double mu = image_factor * states.integrate(i, i, g);
    if (!std::isfinite(mu)) throw NumericalError("dipole_ladder: non-finite average dipole");
    ladder.mu.push_back(mu);
  }
  return ladder;
}

std::size_t integrand_peak_index(const boundstates::BoundStateSet& states, std::size_t i,
                                 double alpha) {
  const auto psi = states.wavefunction(i);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double v = psi[k] * psi[k] * induced_dipole(alpha, states.z()[k]);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  return best;
}

}  // namespace adnoise::dipoles
