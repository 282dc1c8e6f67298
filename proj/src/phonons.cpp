#include "adnoise/phonons.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adnoise/errors.hpp"
#include "adnoise/units.hpp"

namespace adnoise::phonons {

using units::hbar;
using units::kB;
using units::kPi;

double bose_occupation(double delta_omega, double temperature) {
  if (!(delta_omega > 0.0)) throw DomainError("bose_occupation: delta_omega must be > 0");
  if (temperature < 0.0) throw DomainError("bose_occupation: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  const double x = hbar * delta_omega / (kB * temperature);
  return 1.0 / std::expm1(x);
}

TransitionRate transition_rate(double energy_i, double energy_f, double coupling,
                               const potential::BulkMaterial& material, double temperature,
                               RateOptions options) {
  const double gap = std::abs(energy_i - energy_f);
  if (!(gap > 1e-12 * std::max(std::abs(energy_i), std::abs(energy_f))))
    throw ModelError("transition_rate: degenerate levels");
  const double dw = gap / hbar;
  if (options.debye_cutoff && dw / (2.0 * kPi) > material.debye_frequency)
    return {0.0, true};
  const double v = material.speed_of_sound;
  // Group as (dw / (hbar v^3 rho)) * coupling^2 to stay well inside double range.
  const double prefactor = dw / (2.0 * kPi * hbar * v * v * v * material.density);
  const double n = bose_occupation(dw, temperature);
  const double thermal = energy_i > energy_f ? n + 1.0 : n;
  return {prefactor * coupling * coupling * thermal, false};
}

TransitionRate transition_rate(const boundstates::BoundStateSet& states,
                               const potential::BulkMaterial& material, std::size_t i,
                               std::size_t f, double temperature, RateOptions options) {
  if (i == f) throw ModelError("transition_rate: initial and final state coincide");
  const double coupling = boundstates::matrix_element_dUdz(states, i, f);
  return transition_rate(states.energy(i), states.energy(f), coupling, material,
                         temperature, options);
}

double gamma0_harmonic(const potential::SurfacePotentialParams& p,
                       const potential::BulkMaterial& material, double nu10) {
  if (!(nu10 > 0.0)) throw DomainError("gamma0_harmonic: nu10 must be > 0");
  const double v = material.speed_of_sound;
  const double nu2 = nu10 * nu10;
  return (nu2 * nu2) * (p.mass / (4.0 * kPi * v * v * v * material.density));
}

namespace {

Eigen::MatrixXd assemble_generator(const Eigen::MatrixXd& gamma) {
  const Eigen::Index n = gamma.rows();
  Eigen::MatrixXd m = gamma.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    double out = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) out += gamma(i, j);
    m(i, i) = -out;
  }
  return m;
}

bool spans_all(const BoolMatrix& linked) {
  const Eigen::Index n = linked.rows();
  if (n == 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Eigen::Index k = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!seen[static_cast<std::size_t>(j)] && linked(k, j)) {
        seen[static_cast<std::size_t>(j)] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == static_cast<std::size_t>(n);
}

}  // namespace

RateMatrix::RateMatrix(Eigen::MatrixXd gamma, std::vector<double> energies,
                       double temperature, BoolMatrix cutoff_mask)
    : gamma_(std::move(gamma)),
      energies_(std::move(energies)),
      temperature_(temperature),
      mask_(std::move(cutoff_mask)) {
  const Eigen::Index n = static_cast<Eigen::Index>(energies_.size());
  if (gamma_.rows() != n || gamma_.cols() != n || mask_.rows() != n || mask_.cols() != n)
    throw ModelError("RateMatrix: dimension mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    gamma_(i, i) = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(gamma_(i, j) >= 0.0) || !std::isfinite(gamma_(i, j)))
        throw ModelError("RateMatrix: rates must be finite and non-negative");
      if (mask_(i, j) != mask_(j, i)) throw ModelError("RateMatrix: cutoff mask not symmetric");
    }
  }
  generator_ = assemble_generator(gamma_);
  linked_ = (gamma_.array() > 0.0) || (gamma_.transpose().array() > 0.0);
}

RateMatrix::RateMatrix(Eigen::MatrixXd gamma, std::vector<double> energies,
                       double temperature)
    : RateMatrix(gamma, energies, temperature,
                 BoolMatrix::Constant(gamma.rows(), gamma.cols(), false)) {}

std::vector<std::pair<std::size_t, std::size_t>> RateMatrix::masked_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (Eigen::Index i = 0; i < mask_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < mask_.cols(); ++j)
      if (mask_(i, j)) out.emplace_back(i, j);
  return out;
}

bool RateMatrix::connected() const { return spans_all(linked_); }

Eigen::MatrixXd coupling_matrix(const boundstates::BoundStateSet& states) {
  const Eigen::Index n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index f = i; f < n; ++f)
      c(i, f) = c(f, i) = boundstates::matrix_element_dUdz(states, i, f);
  return c;
}

RateMatrix build_rate_matrix(const boundstates::BoundStateSet& states,
                             const Eigen::MatrixXd& couplings,
                             const potential::BulkMaterial& material, double temperature,
                             RateOptions options) {
  const Eigen::Index n = static_cast<Eigen::Index>(states.size());
  if (n < 2) throw ModelError("build_rate_matrix: at least two bound states required");
  if (temperature < 0.0) throw DomainError("build_rate_matrix: temperature must be >= 0");
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(n, n);
  BoolMatrix mask = BoolMatrix::Constant(n, n, false);
  // Couplings do not depend on T; use a T-independent graph for ergodicity.
  BoolMatrix linked = BoolMatrix::Constant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index f = 0; f < n; ++f) {
      if (i == f) continue;
      const TransitionRate t = transition_rate(states.energy(i), states.energy(f),
                                               couplings(i, f), material, temperature,
                                               options);
      gamma(i, f) = t.rate;
      mask(i, f) = t.cutoff;
      linked(i, f) = !t.cutoff && couplings(i, f) != 0.0;
    }
  }
  if (!spans_all(linked)) {
    const bool any_mask = mask.any();
    throw ModelError(any_mask ? "ergodicity broken by Debye cutoff"
                              : "transition graph is disconnected");
  }
  return RateMatrix(std::move(gamma), states.energies(), temperature, std::move(mask));
}

RateMatrix build_rate_matrix(const boundstates::BoundStateSet& states,
                             const potential::BulkMaterial& material, double temperature,
                             RateOptions options) {
  return build_rate_matrix(states, coupling_matrix(states), material, temperature, options);
}

Eigen::VectorXd stationary_distribution(const RateMatrix& r) {
  const Eigen::Index n = static_cast<Eigen::Index>(r.size());
  // Transition-rate matrix Q(i, j) = Gamma(i -> j); eliminate the highest
  // state first, redistributing its flow among the remaining ones.
  Eigen::MatrixXd q = r.gamma();
  const double scale = r.generator().cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw ModelError("stationary_distribution: generator is zero");
  const double tol = 1e-10 * scale;
  std::vector<double> pivot(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index k = n - 1; k > 0; --k) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) s += q(k, j);
    pivot[static_cast<std::size_t>(k)] = s;
    if (!(s > tol))
      throw ModelError("stationary_distribution: zero eigenvalue of the generator is not simple");
    for (Eigen::Index i = 0; i < k; ++i) {
      const double from_i = q(i, k) / s;
      if (from_i == 0.0) continue;
      for (Eigen::Index j = 0; j < k; ++j)
        if (j != i) q(i, j) += from_i * q(k, j);
    }
  }
  Eigen::VectorXd p(n);
  p(0) = 1.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    double inflow = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) inflow += p(i) * q(i, k);
    p(k) = inflow / pivot[static_cast<std::size_t>(k)];
  }
  return p / p.sum();
}

Eigen::VectorXd boltzmann_weights(const std::vector<double>& energies, double temperature) {
  const Eigen::Index n = static_cast<Eigen::Index>(energies.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  if (n == 0) return w;
  const double e_min = *std::min_element(energies.begin(), energies.end());
  if (temperature == 0.0) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (energies[static_cast<std::size_t>(i)] == e_min) w(i) = 1.0;
    return w / w.sum();
  }
  for (Eigen::Index i = 0; i < n; ++i)
    w(i) = std::exp(-(energies[static_cast<std::size_t>(i)] - e_min) / (kB * temperature));
  return w / w.sum();
}

}  // namespace adnoise::phonons
