#include "adnoise/trapnoise.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "adnoise/errors.hpp"
#include "adnoise/units.hpp"

namespace adnoise::trapnoise {

using units::coulomb_constant;

void validate(const TrapConfig& t) {
  if (!(t.distance > 0.0)) throw ConfigError("trap.distance must be > 0");
  if (!(t.trap_frequency > 0.0)) throw ConfigError("trap.frequency must be > 0");
  if (!(t.ion_mass > 0.0)) throw ConfigError("trap.ion_mass must be > 0");
  if (!(t.charge > 0.0)) throw ConfigError("trap.charge must be > 0");
  const double norm = std::sqrt(t.axis[0] * t.axis[0] + t.axis[1] * t.axis[1] +
                                t.axis[2] * t.axis[2]);
  if (!(std::abs(norm - 1.0) <= 1e-12)) throw ConfigError("trap.axis must be a unit vector");
}

std::array<double, 3> dipole_field_kernel(Point2 source, kernels::Point3 ion) {
  if (!(ion.z > 0.0)) throw DomainError("dipole_field_kernel: ion must be above the plane");
  const double rx = ion.x - source.x, ry = ion.y - source.y, rz = ion.z;
  const double r2 = rx * rx + ry * ry + rz * rz;
  const double r = std::sqrt(r2);
  const double k = coulomb_constant / (r2 * r);
  const double c = 3.0 * rz / r2;
  return {k * c * rx, k * c * ry, k * (c * rz - 1.0)};
}

double plane_field_noise(double constant, double sigma, double s_mu, double d) {
  if (!(d > 0.0)) throw DomainError("field noise: distance must be > 0");
  if (sigma < 0.0 || s_mu < 0.0) throw DomainError("field noise: inputs must be >= 0");
  const double d2 = d * d;
  return constant * sigma * coulomb_constant * coulomb_constant * s_mu / (d2 * d2);
}

double analytic_field_noise(double sigma, double s_mu, double d) {
  return plane_field_noise(kSurfaceAverageConstant, sigma, s_mu, d);
}

double kernel_integral_constant(double d) {
  if (!(d > 0.0)) throw DomainError("kernel_integral_constant: d must be > 0");
  // Lateral offset x in units of d; E_z scaled by d^3 (4 pi eps0).
  auto f = [d](double x) {
    const auto e = dipole_field_kernel({x * d, 0.0}, {0.0, 0.0, d});
    const double ez = e[2] * d * d * d / coulomb_constant;
    return 2.0 * units::kPi * x * ez * ez;
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  const double value = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                            1e-13, &error);
  if (!std::isfinite(value) || error > 1e-9 * std::abs(value))
    throw NumericalError("kernel_integral_constant: quadrature did not converge");
  return value;
}

SurfaceSample sample_surface(std::size_t n, double extent, double min_spacing,
                             std::uint64_t seed) {
  if (!(extent > 0.0) || min_spacing < 0.0)
    throw DomainError("sample_surface: extent must be > 0 and min_spacing >= 0");
  const double excluded = static_cast<double>(n) * units::kPi * min_spacing * min_spacing / 4.0;
  if (!(excluded < 0.5 * extent * extent))
    throw DomainError("sample_surface: requested packing is infeasible");
  SurfaceSample s;
  s.extent = extent;
  s.min_spacing = min_spacing;
  s.seed = seed;
  s.xs.reserve(n);
  s.ys.reserve(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, extent);
  const double min2 = min_spacing * min_spacing;
  std::size_t rejections = 0;
  while (s.xs.size() < n) {
    const double x = coord(rng);
    const double y = coord(rng);
    bool ok = true;
    for (std::size_t i = 0; i < s.xs.size() && ok; ++i) {
      const double dx = x - s.xs[i], dy = y - s.ys[i];
      ok = dx * dx + dy * dy >= min2;
    }
    if (!ok) {
      if (++rejections >= 1000000)
        throw NumericalError("sample_surface: packing failed after 1e6 consecutive rejections");
      continue;
    }
    rejections = 0;
    s.xs.push_back(x);
    s.ys.push_back(y);
  }
  return s;
}

double mc_field_noise(const SurfaceSample& sample, double s_mu, const TrapConfig& trap) {
  if (!(trap.distance > 0.0)) throw DomainError("mc_field_noise: distance must be > 0");
  const kernels::Point3 ion{0.5 * sample.extent, 0.5 * sample.extent, trap.distance};
  const kernels::Point3 axis{trap.axis[0], trap.axis[1], trap.axis[2]};
  const double power = kernels::vertical_dipole_power(sample.xs, sample.ys, ion, axis);
  return coulomb_constant * coulomb_constant * power * s_mu;
}

ScalingFit distance_scaling_fit(std::span<const SurfaceSample> samples, double s_mu,
                                const TrapConfig& trap, std::span<const double> distances,
                                bool allow_outside) {
  if (samples.empty()) throw AnalysisError("distance_scaling_fit: no samples");
  if (distances.size() < 3) throw AnalysisError("distance_scaling_fit: need >= 3 distances");
  if (!allow_outside) {
    for (const SurfaceSample& s : samples) {
      const double lo = 3.0 * s.min_spacing, hi = s.extent / 10.0;
      for (double d : distances) {
        if (d < lo * (1.0 - 1e-12) || d > hi * (1.0 + 1e-12))
          throw AnalysisError(
              "distance_scaling_fit: d = " + std::to_string(d) + " m outside the valid window [" +
              std::to_string(lo) + ", " + std::to_string(hi) +
              "] m; below it single dipoles dominate, above it the finite patch acts as one "
              "composite source");
      }
    }
  }
  ScalingFit fit;
  TrapConfig t = trap;
  for (double d : distances) {
    t.distance = d;
    double sum = 0.0, sum2 = 0.0;
    for (const SurfaceSample& s : samples) {
      const double v = mc_field_noise(s, s_mu, t);
      sum += v;
      sum2 += v * v;
    }
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;
    const double var = samples.size() > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
    fit.points.push_back({d, mean, std::sqrt(var / n), samples.size()});
  }
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(fit.points.size());
  for (const DistancePoint& p : fit.points) {
    if (!(p.mean > 0.0)) throw AnalysisError("distance_scaling_fit: non-positive S_E");
    mx += std::log(p.distance);
    my += std::log(p.mean);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const DistancePoint& p : fit.points) {
    const double x = std::log(p.distance) - mx;
    sxx += x * x;
    sxy += x * (std::log(p.mean) - my);
  }
  if (!(sxx > 0.0)) throw AnalysisError("distance_scaling_fit: distances are all equal");
  fit.exponent = sxy / sxx;
  double ss = 0.0;
  for (const DistancePoint& p : fit.points) {
    const double r = std::log(p.mean) - my - fit.exponent * (std::log(p.distance) - mx);
    ss += r * r;
  }
  fit.stderr_ = n > 2.0 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  return fit;
}

double heating_rate(const TrapConfig& trap, double s_e) {
  if (s_e < 0.0) throw DomainError("heating_rate: S_E must be >= 0");
  return trap.charge * trap.charge / (2.0 * trap.ion_mass * units::hbar * trap.trap_frequency) *
         s_e;
}

}  // namespace adnoise::trapnoise
