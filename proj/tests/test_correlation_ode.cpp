#include "doctest.h"

#include <cmath>

#include "adnoise/correlation_ode.hpp"
#include "adnoise/dipoles.hpp"
#include "adnoise/errors.hpp"
#include "adnoise/spectrum.hpp"
#include "test_support.hpp"

using namespace adnoise;
using namespace adnoise::spectrum;
using doctest::Approx;

namespace {

const potential::BulkMaterial kAu = potential::material_preset("Au");

phonons::RateMatrix two_state(double up, double down) {
  Eigen::MatrixXd g(2, 2);
  g << 0.0, up, down, 0.0;
  return phonons::RateMatrix(g, {0.0, 1e-22}, 4.0);
}

}  // namespace

TEST_CASE("telegraph correlation") {
  const phonons::RateMatrix r = two_state(0.4e6, 2.6e6);
  const Eigen::VectorXd p = phonons::stationary_distribution(r);
  dipoles::DipoleLadder l;
  l.mu = {3e-32, 1e-32};
  const CorrelationTrace tr = correlation_via_ode(r, p, l);
  const double var = p(0) * p(1) * 4e-64;
  REQUIRE(tr.tau.size() > 10);
  CHECK(tr.tau.front() == 0.0);
  CHECK(tr.value.front() == Approx(var).epsilon(1e-12));
  CHECK(tr.variance == Approx(var).epsilon(1e-12));
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.tau.size(); ++k) {
    const double exact = var * std::exp(-3.0e6 * tr.tau[k]);
    worst = std::max(worst, std::abs(tr.value[k] - exact) / var);
  }
  CHECK(worst < 1e-7);

  const std::vector<double> omegas{0.0, 1e5, 3e6, 1e8};
  const auto s = fourier_spectrum(tr, omegas);
  for (std::size_t j = 0; j < omegas.size(); ++j) {
    const double exact = var * 2.0 * 3.0e6 / (omegas[j] * omegas[j] + 9.0e12);
    CHECK(s[j] == Approx(exact).epsilon(1e-4));
  }
}

TEST_CASE("ODE route agrees with the mode decomposition for Ne") {
  const auto states = testing::ne_states();
  const auto ladder = dipoles::dipole_ladder(states, states.params().polarizability);
  const double nu10 = (states.energy(1) - states.energy(0)) / units::hbar;
  const double g0 = phonons::transition_rate(states, kAu, 1, 0, 0.0).rate;
  for (double ratio : {0.5, 2.0, 6.0}) {
    CAPTURE(ratio);
    const double t = ratio * units::hbar * nu10 / units::kB;
    const phonons::RateMatrix r = phonons::build_rate_matrix(states, kAu, t);
    const Eigen::VectorXd p = phonons::stationary_distribution(r);
    const DipoleSpectrum modes = correlation_modes(r, p, ladder);
    const auto omegas = log_grid(1e-2 * g0, 1e3 * g0, 20);
    const auto ode = spectrum_via_ode(r, p, ladder, omegas);
    const auto exact = evaluate_spectrum(modes, omegas);
    double worst = 0.0;
    for (std::size_t j = 0; j < omegas.size(); ++j)
      worst = std::max(worst, std::abs(ode[j] / exact[j] - 1.0));
    MESSAGE("kT/hnu10 = " << ratio << ": worst deviation " << worst);
    CHECK(worst < 0.02);

    const CorrelationTrace tr = correlation_via_ode(r, p, ladder);
    CHECK(tr.value.front() == Approx(modes.variance).epsilon(1e-10));
    CHECK(tr.mean == Approx(modes.mean_dipole).epsilon(1e-12));
  }
}

TEST_CASE("horizon too short is a numerical error") {
  const phonons::RateMatrix r = two_state(0.4e6, 2.6e6);
  const Eigen::VectorXd p = phonons::stationary_distribution(r);
  dipoles::DipoleLadder l;
  l.mu = {3e-32, 1e-32};
  OdeOptions o;
  o.tau_max = 1e-7;
  CHECK_THROWS_AS(correlation_via_ode(r, p, l, o), NumericalError);
  o.tau_max = 0.0;
  o.max_steps = 3;
  CHECK_THROWS_AS(correlation_via_ode(r, p, l, o), NumericalError);
}
