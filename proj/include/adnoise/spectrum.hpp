#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "adnoise/dipoles.hpp"
#include "adnoise/phonons.hpp"

namespace adnoise::spectrum {

struct Mode {
  double rate = 0.0;    // lambda_k, 1/s
  double weight = 0.0;  // (C*m)^2
};

/// Lorentzian decomposition of the dipole autocorrelation
///   C(tau) = sum_k weight_k exp(-lambda_k |tau|).
struct DipoleSpectrum {
  std::vector<Mode> modes;
  double mean_dipole = 0.0;
  double variance = 0.0;
  double temperature = 0.0;
};

/// Modes of the symmetrized generator D^-1/2 M D^1/2, D = diag(p0).  States
/// with p0 = 0 (T = 0) are dropped first.  ModelError when detailed balance
/// fails by more than 1e-8 max|A|.
DipoleSpectrum correlation_modes(const phonons::RateMatrix& r, const Eigen::VectorXd& p0,
                                 const dipoles::DipoleLadder& ladder);

/// Two-sided S(omega) = sum_k w_k 2 lambda_k / (omega^2 + lambda_k^2), in (C*m)^2 s.
double evaluate_spectrum(const DipoleSpectrum& s, double omega);
std::vector<double> evaluate_spectrum(const DipoleSpectrum& s, std::span<const double> omegas);

double correlation(const DipoleSpectrum& s, double tau);

/// Integral of S over all omega divided by 2 pi, by adaptive quadrature.
double integrated_power(const DipoleSpectrum& s);

/// (mu0 - mu1)^2 2 Gamma0/(omega^2 + Gamma0^2) exp(-hbar nu10 / kT).
double two_level_limit(double mu0, double mu1, double gamma0, double nu10, double temperature,
                       double omega);

/// Gamma0 (n(nu10) + 1).
double crossover_frequency(double gamma0, double nu10, double temperature);

/// Logarithmic grid with `per_decade` points per decade, both ends included.
std::vector<double> log_grid(double lo, double hi, int per_decade);

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;  // of ln S vs ln omega
  std::size_t points = 0;
};

/// Least squares of ln S against ln omega over omegas in [lo, hi].
/// AnalysisError for fewer than 8 points or non-positive values.
SlopeFit fit_loglog_slope(std::span<const double> omegas, std::span<const double> values,
                          double lo, double hi);

struct ArrheniusFit {
  double prefactor = 0.0;   // S_T
  double activation = 0.0;  // T0, kelvin
  double residual = 0.0;    // rms of ln S
  std::size_t points = 0;
};

/// Fits S = S_T exp(-T0/T) on the points below the maximum of `values`.
/// AnalysisError when fewer than 4 points lie on a strictly rising flank.
ArrheniusFit arrhenius_fit(std::span<const double> temperatures, std::span<const double> values);

/// Frequency where the low-frequency plateau S(omegas[0]) meets the power law
/// fitted over [lo, hi].
double knee_frequency(std::span<const double> omegas, std::span<const double> values, double lo,
                      double hi);

}  // namespace adnoise::spectrum
