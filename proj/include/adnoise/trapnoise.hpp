#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "adnoise/kernels.hpp"

namespace adnoise::trapnoise {

struct TrapConfig {
  double distance = 0.0;        // d, ion height above the electrode [m]
  double trap_frequency = 0.0;  // omega_t [rad/s]
  double ion_mass = 0.0;        // [kg]
  double charge = 0.0;          // [C]
  std::array<double, 3> axis{0.0, 0.0, 1.0};

  bool operator==(const TrapConfig&) const = default;
};

void validate(const TrapConfig& t);

struct Point2 {
  double x, y;
};

/// Dipole positions in the electrode plane z = 0, inside [0, extent]^2.
struct SurfaceSample {
  std::vector<double> xs;
  std::vector<double> ys;
  double min_spacing = 0.0;
  double extent = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return xs.size(); }
  double density() const { return static_cast<double>(xs.size()) / (extent * extent); }
};

/// Field at `ion` of a unit dipole normal to the plane at `source`,
/// including 1/(4 pi eps0): E = (3 (z.r^) r^ - z^) / (4 pi eps0 r^3).  V/m per C*m.
std::array<double, 3> dipole_field_kernel(Point2 source, kernels::Point3 ion);

/// Surface-averaged field noise, S_E = (3/8) sigma S_mu / ((4 pi eps0)^2 d^4).
double analytic_field_noise(double sigma, double s_mu, double d);
inline constexpr double kSurfaceAverageConstant = 3.0 / 8.0;

/// K = d^4 (4 pi eps0)^2 int d^2s E_z(s; d)^2 over the infinite plane, by
/// quadrature.  The closed form is 3 pi / 4.
double kernel_integral_constant(double d = 1.0);

/// S_E from a uniform dipole density using an arbitrary plane constant.
double plane_field_noise(double constant, double sigma, double s_mu, double d);

/// Uniform rejection sampling with exclusion radius `min_spacing`.
SurfaceSample sample_surface(std::size_t n, double extent, double min_spacing,
                             std::uint64_t seed);

/// Incoherent sum over the sample of |axis . E_i|^2 S_mu for an ion at
/// height trap.distance above the centre of the sampled square.
double mc_field_noise(const SurfaceSample& sample, double s_mu, const TrapConfig& trap);

struct DistancePoint {
  double distance = 0.0;
  double mean = 0.0;    // seed-averaged S_E
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

struct ScalingFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  std::vector<DistancePoint> points;
};

/// Seed-averaged S_E at every distance and the log-log exponent.  Distances
/// must lie in [3 min_spacing, extent / 10] unless allow_outside is set;
/// AnalysisError otherwise.
ScalingFit distance_scaling_fit(std::span<const SurfaceSample> samples, double s_mu,
                                const TrapConfig& trap, std::span<const double> distances,
                                bool allow_outside = false);

/// n-dot = q^2 / (2 m hbar omega_t) S_E(omega_t).
double heating_rate(const TrapConfig& trap, double s_e);

}  // namespace adnoise::trapnoise
