#include "adnoise/boundstates.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "adnoise/errors.hpp"
#include "adnoise/kernels.hpp"
#include "adnoise/units.hpp"

namespace adnoise::boundstates {

using potential::SurfacePotentialParams;

void validate(const Grid& g) {
  if (!(g.z_min > 0.0) || !(g.z_max > g.z_min))
    throw GridError("grid requires 0 < z_min < z_max");
  if (g.n_points < 200) throw GridError("grid requires at least 200 points");
}

Grid auto_grid(const SurfacePotentialParams& p, std::size_t n_points) {
  potential::validate(p);
  if (n_points < 200) throw GridError("auto_grid: n_points must be >= 200");
  const double wall_level = 10.0 * p.depth;
  const potential::InnerBarrier top = potential::inner_barrier(p);
  const double z_min =
      top.height >= wall_level ? potential::wall_crossing(p, wall_level) : top.position;

  // Beyond z0 the well rises monotonically to zero from below.
  const double tail_level = -1e-4 * p.depth;
  double lo = p.equilibrium;
  double hi = 2.0 * p.equilibrium;
  while (potential::evaluate(p, hi) < tail_level) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (potential::evaluate(p, mid) < tail_level ? lo : hi) = mid;
  }
  return {z_min, std::max(6.0 * p.equilibrium, hi), n_points};
}

BoundStateSet::BoundStateSet(SurfacePotentialParams params, Grid grid,
                             std::vector<double> energies,
                             std::vector<std::vector<double>> wavefunctions,
                             SolveDiagnostics diagnostics)
    : params_(std::move(params)),
      grid_(grid),
      energies_(std::move(energies)),
      wavefunctions_(std::move(wavefunctions)),
      diagnostics_(diagnostics) {
  z_.resize(grid_.n_points);
  dudz_.resize(grid_.n_points);
  for (std::size_t i = 0; i < grid_.n_points; ++i) {
    z_[i] = grid_.at(i);
    dudz_[i] = potential::derivative(params_, z_[i]);
  }
}

double BoundStateSet::integrate(std::size_t i, std::size_t f,
                                std::span<const double> g) const {
  const auto a = wavefunction(i);
  const auto b = wavefunction(f);
  if (g.size() != a.size()) throw NumericalError("integrand length does not match grid");
  const std::size_t last = a.size() - 1;
  const double interior = kernels::dot3(a, b, g);
  const double ends = 0.5 * (a[0] * b[0] * g[0] + a[last] * b[last] * g[last]);
  return grid_.spacing() * (interior - ends);
}

namespace {

// Index of the first local maximum of |psi| counted from the wall.
std::size_t first_antinode(const std::vector<double>& psi) {
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::abs(v));
  const double floor = 1e-6 * peak;
  for (std::size_t k = 1; k + 1 < psi.size(); ++k) {
    const double a = std::abs(psi[k]);
    if (a > floor && a >= std::abs(psi[k - 1]) && a >= std::abs(psi[k + 1])) return k;
  }
  return 0;
}

// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x.
std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                        double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = diag[i] - x - e2 / q;
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

BoundStateSet solve(const SurfacePotentialParams& p, const Grid& grid,
                    std::size_t max_states) {
  potential::validate(p);
  validate(grid);
  if (max_states < 2) throw ModelError("solve: max_states must be at least 2");

  const std::size_t n = grid.n_points;
  const double h = grid.spacing();
  // Work in units of U0 so the tridiagonal entries are O(1).
  const double kinetic = units::hbar * units::hbar / (2.0 * p.mass * h * h) / p.depth;
  std::vector<double> diag(n), off(n - 1, -kinetic);
  for (std::size_t i = 0; i < n; ++i)
    diag[i] = 2.0 * kinetic + potential::evaluate(p, grid.at(i)) / p.depth;

  // Count the negative eigenvalues first with Sturm sequences (every
  // eigenvalue lies above min U >= -U0), then fetch only the vectors needed.
  // dstevr overwrites its diagonal inputs, so it gets fresh copies.
  const lapack_int ln = static_cast<lapack_int>(n);
  auto below = [&](double x) { return sturm_count(diag, off, x); };
  const std::size_t negative = below(0.0);
  const std::size_t count = negative - below(-2.0);
  if (count < 2) throw ModelError("potential too shallow for spectrum analysis");
  // Eigenvalues ascend and discards only happen above -kGuaranteedFraction U0,
  // so the kept states are among the lowest max_states plus that band.
  const std::size_t near_threshold = std::min(count, negative - below(-kGuaranteedFraction));
  const std::size_t fetch_count = std::min(count, max_states + near_threshold);
  const lapack_int fetch = static_cast<lapack_int>(fetch_count);
  const std::size_t unfetched_threshold =
      std::min(count - fetch_count, negative - below(-kThresholdFraction));
  std::vector<double> w(n);
  std::vector<lapack_int> support(2 * n);
  lapack_int found = 0;
  std::vector<double> vectors(n * static_cast<std::size_t>(fetch));
  {
    std::vector<double> d = diag, e = off;
    const lapack_int info =
        LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', ln, d.data(), e.data(), 0.0, 0.0, 1,
                       fetch, 0.0, &found, w.data(), vectors.data(), ln, support.data());
    if (info != 0)
      throw NumericalError("tridiagonal eigensolver failed, info=" + std::to_string(info));
  }

  SolveDiagnostics diag_report;
  diag_report.negative_eigenvalues = count;
  diag_report.discarded_threshold = unfetched_threshold;
  diag_report.truncated = count - fetch_count - unfetched_threshold;
  std::vector<double> energies;
  std::vector<std::vector<double>> states;
  const double inv_sqrt_h = 1.0 / std::sqrt(h);
  for (std::size_t k = 0; k < static_cast<std::size_t>(found); ++k) {
    const double e_rel = w[k];
    if (e_rel >= 0.0) continue;
    if (e_rel >= -kThresholdFraction) {
      ++diag_report.discarded_threshold;
      continue;
    }
    if (energies.size() == max_states) {
      ++diag_report.truncated;
      continue;
    }
    std::vector<double> psi(vectors.begin() + static_cast<std::ptrdiff_t>(k * n),
                            vectors.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
    for (double& v : psi) v *= inv_sqrt_h;
    const double tail = psi.back() * psi.back() * h;
    if (!(tail < kTailTolerance)) {
      if (e_rel < -kGuaranteedFraction)
        throw GridError("bound state at E = " + std::to_string(e_rel) +
                        " U0 is not localized inside the grid (tail weight " +
                        std::to_string(tail) + ")");
      ++diag_report.discarded_tail;
      continue;
    }
    if (psi[first_antinode(psi)] < 0.0)
      for (double& v : psi) v = -v;
    diag_report.max_tail_weight = std::max(diag_report.max_tail_weight, tail);
    energies.push_back(e_rel * p.depth);
    states.push_back(std::move(psi));
  }
  if (energies.size() < 2) throw ModelError("potential too shallow for spectrum analysis");
  return BoundStateSet(p, grid, std::move(energies), std::move(states), diag_report);
}

double matrix_element_dUdz(const BoundStateSet& s, std::size_t i, std::size_t f) {
  if (i >= s.size() || f >= s.size())
    throw std::out_of_range("matrix_element_dUdz: state index out of range");
  return s.integrate(i, f, s.force_gradient());
}

double expectation(const BoundStateSet& s, std::size_t i, std::size_t f,
                   const std::function<double(double)>& g) {
  if (i >= s.size() || f >= s.size())
    throw std::out_of_range("expectation: state index out of range");
  std::vector<double> values(s.z().size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = g(s.z()[k]);
    if (!std::isfinite(values[k]))
      throw NumericalError("expectation: integrand is not finite on the grid");
  }
  return s.integrate(i, f, values);
}

}  // namespace adnoise::boundstates
