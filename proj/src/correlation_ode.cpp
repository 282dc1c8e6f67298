#include "adnoise/correlation_ode.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <map>

#include "adnoise/errors.hpp"

namespace adnoise::spectrum {

namespace {

constexpr double kGamma = 2.0 - 1.4142135623730951;  // TR-BDF2 stage fraction
constexpr double kDiag = kGamma / 2.0;
constexpr double kW1 = 1.0 / (kGamma * (2.0 - kGamma));
constexpr double kW0 = (1.0 - kGamma) * (1.0 - kGamma) / (kGamma * (2.0 - kGamma));
constexpr double kRefStep = 1e-4;  // in units of 1 / max|M|

double lattice_step(int k) { return kRefStep * std::exp2(0.25 * k); }

class Stepper {
 public:
  Stepper(Eigen::MatrixXd a, Eigen::VectorXd b) : a_(std::move(a)), b_(std::move(b)) {}

  Eigen::VectorXd rhs(const Eigen::VectorXd& y) const { return a_ * y + b_; }

  Eigen::VectorXd step(const Eigen::VectorXd& y, double h, const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) const {
    const Eigen::VectorXd f0 = rhs(y);
    const Eigen::VectorXd stage = lu.solve(y + kDiag * h * (f0 + b_));
    return lu.solve(kW1 * stage - kW0 * y + kDiag * h * b_);
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd>& lu_for(int k) {
    auto it = cache_.find(k);
    if (it == cache_.end()) it = cache_.emplace(k, factor(lattice_step(k))).first;
    return it->second;
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> factor(double h) const {
    const Eigen::Index n = a_.rows();
    return Eigen::PartialPivLU<Eigen::MatrixXd>(Eigen::MatrixXd::Identity(n, n) - kDiag * h * a_);
  }

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  std::map<int, Eigen::PartialPivLU<Eigen::MatrixXd>> cache_;
};

}  // namespace

CorrelationTrace correlation_via_ode(const phonons::RateMatrix& r, const Eigen::VectorXd& p0,
                                     const dipoles::DipoleLadder& ladder,
                                     const OdeOptions& options) {
  const Eigen::Index n = static_cast<Eigen::Index>(r.size());
  if (n < 2 || p0.size() != n || static_cast<Eigen::Index>(ladder.mu.size()) < n)
    throw ModelError("correlation_via_ode: dimension mismatch");
  if (options.tau_max < 0.0 || !(options.tolerance > 0.0))
    throw ConfigError("correlation_via_ode: invalid options");

  // Dimensionless copy: dipoles in units of max|mu|, time in 1/max|M|.
  const Eigen::MatrixXd& m_si = r.generator();
  const double rate_scale = m_si.cwiseAbs().maxCoeff();
  double mu_scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) mu_scale = std::max(mu_scale, std::abs(ladder.mu[i]));
  if (!(rate_scale > 0.0)) throw ModelError("correlation_via_ode: generator is zero");
  if (!(mu_scale > 0.0)) mu_scale = 1.0;
  const Eigen::MatrixXd m = m_si / rate_scale;
  Eigen::VectorXd mu(n);
  for (Eigen::Index i = 0; i < n; ++i) mu(i) = ladder.mu[i] / mu_scale;
  const Eigen::VectorXd p = p0 / p0.sum();

  const double mean = p.dot(mu);
  double var = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) var += p(i) * (mu(i) - mean) * (mu(i) - mean);

  CorrelationTrace trace;
  trace.mean = mean * mu_scale;
  trace.variance = var * mu_scale * mu_scale;
  if (!(var > 0.0)) {
    trace.tau = {0.0};
    trace.value = {0.0};
    trace.slope = {0.0};
    return trace;
  }

  const Eigen::Index last = n - 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < last; ++j) a(i, j) = m(i, j) - m(i, last);
    b(i) = m(i, last) * mean;
  }
  Stepper stepper(a, b);

  Eigen::VectorXd y = mu.cwiseProduct(p);
  const Eigen::VectorXd y_eq = p * mean;
  const Eigen::VectorXd mu_abs = mu.cwiseAbs();
  const double c_offset = mean * mean;
  auto record = [&](double t, const Eigen::VectorXd& state) {
    trace.tau.push_back(t / rate_scale);
    trace.value.push_back((mu.dot(state) - c_offset) * mu_scale * mu_scale);
    trace.slope.push_back(mu.dot(stepper.rhs(state)) * mu_scale * mu_scale * rate_scale);
  };
  record(0.0, y);

  const bool fixed_horizon = options.tau_max > 0.0;
  const double t_end = options.tau_max * rate_scale;
  const double settle = 1e-9 * var;
  const double accept_scale = options.tolerance * var;
  const int k_min = -4 * 40;  // h = 1e-4 * 2^-40
  const int k_max = 4 * 60;
  int k = 0;
  double t = 0.0;
  std::size_t steps = 0;
  int consecutive_rejects = 0;

  while (true) {
    if (fixed_horizon && t >= t_end * (1.0 - 1e-14)) break;
    if (!fixed_horizon && mu_abs.dot((y - y_eq).cwiseAbs()) < settle) break;
    if (++steps > options.max_steps)
      throw NumericalError("correlation_via_ode: step budget exhausted");

    double h = lattice_step(k);
    const bool clipped = fixed_horizon && t + h > t_end;
    Eigen::VectorXd full, half;
    if (clipped) {
      h = t_end - t;
      const auto lu_full = stepper.factor(h);
      const auto lu_half = stepper.factor(0.5 * h);
      full = stepper.step(y, h, lu_full);
      half = stepper.step(stepper.step(y, 0.5 * h, lu_half), 0.5 * h, lu_half);
    } else {
      full = stepper.step(y, h, stepper.lu_for(k));
      const auto& lu_half = stepper.lu_for(k - 4);
      half = stepper.step(stepper.step(y, 0.5 * h, lu_half), 0.5 * h, lu_half);
    }
    const double err = mu_abs.dot((half - full).cwiseAbs()) / 3.0 / accept_scale;
    if (!std::isfinite(err)) throw NumericalError("correlation_via_ode: non-finite state");
    const double factor = std::clamp(0.9 * std::cbrt(1.0 / std::max(err, 1e-12)), 0.2, 4.0);
    const int dk = static_cast<int>(std::floor(4.0 * std::log2(factor)));
    if (err <= 1.0) {
      t += h;
      y = half;
      record(t, y);
      consecutive_rejects = 0;
      k = std::min(k_max, k + std::max(dk, 0));
    } else {
      ++trace.rejected;
      if (++consecutive_rejects > 60 || k <= k_min)
        throw NumericalError("correlation_via_ode: step size collapsed (stiffness failure)");
      k = std::max(k_min, k + std::min(dk, -1));
    }
  }

  if (std::abs(trace.value.back()) > 1e-4 * trace.variance)
    throw NumericalError("correlation_via_ode: tau_max too short, C has not decayed");
  return trace;
}

std::vector<double> fourier_spectrum(const CorrelationTrace& trace,
                                     std::span<const double> omegas) {
  using cd = std::complex<double>;
  using boost::math::quadrature::gauss;
  std::vector<double> out(omegas.size(), 0.0);
  const std::size_t nodes = trace.tau.size();
  for (std::size_t w = 0; w < omegas.size(); ++w) {
    const double omega = std::abs(omegas[w]);
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < nodes; ++j) {
      const double t0 = trace.tau[j];
      const double h = trace.tau[j + 1] - t0;
      const double c0 = trace.value[j], c1 = trace.value[j + 1];
      const double d0 = trace.slope[j], d1 = trace.slope[j + 1];
      const double c2 = (3.0 * (c1 - c0) / h - 2.0 * d0 - d1) / h;
      const double c3 = (d0 + d1 - 2.0 * (c1 - c0) / h) / (h * h);
      if (omega * h < 0.5) {
        auto f = [&](double s) {
          return (c0 + s * (d0 + s * (c2 + s * c3))) * std::cos(omega * (t0 + s));
        };
        total += gauss<double, 8>::integrate(f, 0.0, h);
      } else {
        // Repeated integration by parts, exact for a cubic.
        const cd iw(0.0, omega);
        auto antiderivative = [&](double s) {
          const double p = c0 + s * (d0 + s * (c2 + s * c3));
          const double p1 = d0 + s * (2.0 * c2 + 3.0 * c3 * s);
          const double p2 = 2.0 * c2 + 6.0 * c3 * s;
          const double p3 = 6.0 * c3;
          return std::exp(iw * s) *
                 (p / iw - p1 / (iw * iw) + p2 / (iw * iw * iw) - p3 / (iw * iw * iw * iw));
        };
        total += (std::exp(cd(0.0, omega * t0)) * (antiderivative(h) - antiderivative(0.0))).real();
      }
    }
    const double ct = trace.value.back();
    const double dt = trace.slope.back();
    if (ct != 0.0 && dt * ct < 0.0) {
      const double rate = -dt / ct;
      total += (std::exp(cd(0.0, omega * trace.tau.back())) * ct / cd(rate, -omega)).real();
    }
    out[w] = 2.0 * total;
  }
  return out;
}

std::vector<double> spectrum_via_ode(const phonons::RateMatrix& r, const Eigen::VectorXd& p0,
                                     const dipoles::DipoleLadder& ladder,
                                     std::span<const double> omegas, const OdeOptions& options) {
  return fourier_spectrum(correlation_via_ode(r, p0, ladder, options), omegas);
}

}  // namespace adnoise::spectrum
