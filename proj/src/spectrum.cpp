#include "adnoise/spectrum.hpp"

#include <algorithm>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "adnoise/errors.hpp"
#include "adnoise/kernels.hpp"
#include "adnoise/units.hpp"

namespace adnoise::spectrum {

DipoleSpectrum correlation_modes(const phonons::RateMatrix& r, const Eigen::VectorXd& p0,
                                 const dipoles::DipoleLadder& ladder) {
  const Eigen::Index n = static_cast<Eigen::Index>(r.size());
  if (p0.size() != n || static_cast<Eigen::Index>(ladder.mu.size()) < n)
    throw ModelError("correlation_modes: dimension mismatch");

  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p0(i) < 0.0) throw ModelError("correlation_modes: negative population");
    if (p0(i) > 0.0) support.push_back(i);
  }
  const Eigen::Index m = static_cast<Eigen::Index>(support.size());

  DipoleSpectrum out;
  out.temperature = r.temperature();
  double total = 0.0;
  for (Eigen::Index a = 0; a < m; ++a) total += p0(support[a]);
  for (Eigen::Index a = 0; a < m; ++a)
    out.mean_dipole += p0(support[a]) / total * ladder.mu[support[a]];
  for (Eigen::Index a = 0; a < m; ++a) {
    const double d = ladder.mu[support[a]] - out.mean_dipole;
    out.variance += p0(support[a]) / total * d * d;
  }
  if (m < 2) return out;

  Eigen::VectorXd sq(m), x(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    sq(a) = std::sqrt(p0(support[a]) / total);
    x(a) = sq(a) * ladder.mu[support[a]];
  }
  const Eigen::MatrixXd& gen = r.generator();
  Eigen::MatrixXd a_sym(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      a_sym(a, b) = gen(support[a], support[b]) * sq(b) / sq(a);
  const double scale = a_sym.cwiseAbs().maxCoeff();
  const double asym = (a_sym - a_sym.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale)
    throw ModelError("correlation_modes: detailed balance violated (asymmetry " +
                     std::to_string(asym / scale) + " of max|A|)");
  a_sym = 0.5 * (a_sym + a_sym.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a_sym);
  if (eig.info() != Eigen::Success)
    throw NumericalError("correlation_modes: eigendecomposition failed");
  // Eigenvalues ascend; the last one is the stationary zero mode.
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const Eigen::MatrixXd& q = eig.eigenvectors();
  out.modes.reserve(static_cast<std::size_t>(m - 1));
  for (Eigen::Index k = 0; k + 1 < m; ++k) {
    const double rate = -lam(k);
    if (!(rate > 1e-12 * scale))
      throw NumericalError("correlation_modes: generator has more than one zero mode");
    const double proj = q.col(k).dot(x);
    out.modes.push_back({rate, proj * proj});
  }
  std::sort(out.modes.begin(), out.modes.end(),
            [](const Mode& a, const Mode& b) { return a.rate < b.rate; });
  return out;
}

std::vector<double> evaluate_spectrum(const DipoleSpectrum& s, std::span<const double> omegas) {
  std::vector<double> rates(s.modes.size()), weights(s.modes.size());
  for (std::size_t k = 0; k < s.modes.size(); ++k) {
    rates[k] = s.modes[k].rate;
    weights[k] = s.modes[k].weight;
  }
  std::vector<double> out(omegas.size());
  kernels::lorentzian_sum(rates, weights, omegas, out);
  return out;
}

double evaluate_spectrum(const DipoleSpectrum& s, double omega) {
  const double w[1] = {omega};
  return evaluate_spectrum(s, std::span<const double>(w, 1))[0];
}

double correlation(const DipoleSpectrum& s, double tau) {
  double c = 0.0;
  for (const Mode& m : s.modes) c += m.weight * std::exp(-m.rate * std::abs(tau));
  return c;
}

double integrated_power(const DipoleSpectrum& s) {
  if (s.modes.empty()) return 0.0;
  // In u = ln(omega / ref) every Lorentzian is a smooth bump decaying
  // exponentially on both sides.
  double log_ref = 0.0;
  for (const Mode& m : s.modes) log_ref += std::log(m.rate);
  log_ref /= static_cast<double>(s.modes.size());
  const double scale = s.variance > 0.0 ? s.variance : 1.0;
  auto f = [&](double u) {
    const double omega = std::exp(log_ref + u);
    if (omega == 0.0 || !std::isfinite(omega)) return 0.0;
    const double v = evaluate_spectrum(s, omega) * omega / scale;
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::sinh_sinh<double> integrator(12);
  double error = 0.0;
  const double value = integrator.integrate(f, 1e-12, &error);
  if (!std::isfinite(value) || error > 1e-6 * std::abs(value))
    throw NumericalError("integrated_power: quadrature did not converge");
  // Even spectrum: the full-line integral is twice the half-line one.
  return value * scale / units::kPi;
}

double two_level_limit(double mu0, double mu1, double gamma0, double nu10, double temperature,
                       double omega) {
  if (!(temperature > 0.0)) throw DomainError("two_level_limit: temperature must be > 0");
  const double d = mu0 - mu1;
  return d * d * 2.0 * gamma0 / (omega * omega + gamma0 * gamma0) *
         std::exp(-units::hbar * nu10 / (units::kB * temperature));
}

double crossover_frequency(double gamma0, double nu10, double temperature) {
  if (temperature < 0.0) throw DomainError("crossover_frequency: temperature must be >= 0");
  return gamma0 * (phonons::bose_occupation(nu10, temperature) + 1.0);
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1)
    throw ConfigError("log_grid: need 0 < lo < hi and per_decade >= 1");
  const double decades = std::log10(hi / lo);
  const int steps = std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
  std::vector<double> out(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k)
    out[static_cast<std::size_t>(k)] = lo * std::pow(10.0, decades * k / steps);
  out.back() = hi;
  return out;
}

namespace {

struct Line {
  double slope, intercept, slope_se, rms;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw AnalysisError("least squares: abscissae are all equal");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss += r * r;
  }
  const double dof = n - 2.0;
  const double se = dof > 0.0 ? std::sqrt(ss / dof / sxx) : 0.0;
  return {slope, intercept, se, std::sqrt(ss / n)};
}

}  // namespace

SlopeFit fit_loglog_slope(std::span<const double> omegas, std::span<const double> values,
                          double lo, double hi) {
  if (omegas.size() != values.size())
    throw AnalysisError("fit_loglog_slope: length mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (omegas[i] < lo || omegas[i] > hi) continue;
    if (!(values[i] > 0.0) || !(omegas[i] > 0.0))
      throw AnalysisError("fit_loglog_slope: values must be positive");
    x.push_back(std::log(omegas[i]));
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 8)
    throw AnalysisError("fit_loglog_slope: only " + std::to_string(x.size()) +
                        " points in window, need 8");
  const Line l = least_squares(x, y);
  return {l.slope, l.slope_se, l.intercept, x.size()};
}

ArrheniusFit arrhenius_fit(std::span<const double> temperatures,
                           std::span<const double> values) {
  if (temperatures.size() != values.size())
    throw AnalysisError("arrhenius_fit: length mismatch");
  std::vector<std::size_t> order(temperatures.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return temperatures[a] < temperatures[b]; });
  std::size_t peak = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (!(values[order[k]] > 0.0) || !(temperatures[order[k]] > 0.0))
      throw AnalysisError("arrhenius_fit: temperatures and values must be positive");
    if (values[order[k]] > values[order[peak]]) peak = k;
  }
  std::vector<double> x, y;
  for (std::size_t k = 0; k <= peak; ++k) {
    if (k > 0 && !(values[order[k]] > values[order[k - 1]]))
      throw AnalysisError("arrhenius_fit: rising flank is not monotonic");
    x.push_back(1.0 / temperatures[order[k]]);
    y.push_back(std::log(values[order[k]]));
  }
  if (x.size() < 4)
    throw AnalysisError("arrhenius_fit: only " + std::to_string(x.size()) +
                        " points on the rising flank, need 4");
  const Line l = least_squares(x, y);
  return {std::exp(l.intercept), -l.slope, l.rms, x.size()};
}

double knee_frequency(std::span<const double> omegas, std::span<const double> values, double lo,
                      double hi) {
  if (omegas.empty()) throw AnalysisError("knee_frequency: no data");
  const SlopeFit f = fit_loglog_slope(omegas, values, lo, hi);
  if (!(f.slope < 0.0)) throw AnalysisError("knee_frequency: fitted line is not falling");
  const double plateau = std::log(values[0]);
  return std::exp((plateau - f.intercept) / f.slope);
}

}  // namespace adnoise::spectrum
