#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "adnoise/dipoles.hpp"
#include "adnoise/phonons.hpp"

namespace adnoise::spectrum {

// Time-domain route to S_mu(omega), independent of the eigenmode
// decomposition.  Integrates the regression equations for
//   y_i(tau) = sum_k mu_k <rho_i(tau) rho_k(0)>,
// using the conservation law to eliminate y_N from the first N-1 equations:
//   dy_i/dtau = sum_{j<N} (M_ij - M_iN) y_j + M_iN <mu>,   i < N,
//   dy_N/dtau = sum_{j<N} (M_Nj - M_NN) y_j + M_NN <mu>,
// with y_i(0) = mu_i p_i, and assembles C(tau) = sum_i mu_i y_i - <mu>^2.

struct OdeOptions {
  // Integration horizon in seconds.  Zero: run until the populations have
  // relaxed to 1e-9 of the variance.
  double tau_max = 0.0;
  // Local error per step, relative to Var(mu).
  double tolerance = 1e-9;
  std::size_t max_steps = 500000;
};

struct CorrelationTrace {
  std::vector<double> tau;    // s
  std::vector<double> value;  // C(tau), (C*m)^2
  std::vector<double> slope;  // dC/dtau from the right-hand side
  double mean = 0.0;
  double variance = 0.0;
  std::size_t rejected = 0;
};

/// TR-BDF2 with step-doubling error control.  NumericalError on step-size
/// collapse, exhausted step budget, or a horizon too short for C to decay.
CorrelationTrace correlation_via_ode(const phonons::RateMatrix& r, const Eigen::VectorXd& p0,
                                     const dipoles::DipoleLadder& ladder,
                                     const OdeOptions& options = {});

/// S(omega) = 2 int_0^inf C(tau) cos(omega tau) dtau over the piecewise
/// cubic Hermite interpolant of the trace, plus an exponential tail.
std::vector<double> fourier_spectrum(const CorrelationTrace& trace,
                                     std::span<const double> omegas);

std::vector<double> spectrum_via_ode(const phonons::RateMatrix& r, const Eigen::VectorXd& p0,
                                     const dipoles::DipoleLadder& ladder,
                                     std::span<const double> omegas,
                                     const OdeOptions& options = {});

}  // namespace adnoise::spectrum
