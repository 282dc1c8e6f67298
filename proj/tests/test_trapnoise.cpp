#include "doctest.h"

#include <cmath>
#include <vector>

#include "adnoise/errors.hpp"
#include "adnoise/trapnoise.hpp"
#include "adnoise/units.hpp"

using namespace adnoise;
using namespace adnoise::trapnoise;
using doctest::Approx;

namespace {

constexpr double kD0 = 1e-6;
const double kK = units::coulomb_constant;

TrapConfig trap_at(double d) {
  TrapConfig t;
  t.distance = d;
  t.trap_frequency = 2.0 * units::kPi * 1e6;
  t.ion_mass = 40.0 * units::amu;
  t.charge = units::e;
  return t;
}

SurfaceSample single_centre(double extent) {
  SurfaceSample s;
  s.xs = {0.5 * extent};
  s.ys = {0.5 * extent};
  s.extent = extent;
  s.min_spacing = kD0;
  return s;
}

}  // namespace

TEST_CASE("dipole field kernel") {
  const double d = 2e-6;
  const auto on_axis = dipole_field_kernel({0, 0}, {0, 0, d});
  CHECK(on_axis[2] == Approx(2.0 * kK / (d * d * d)).epsilon(1e-14));
  CHECK(on_axis[0] == 0.0);
  CHECK(on_axis[1] == 0.0);

  const auto lateral = dipole_field_kernel({d, 0}, {0, 0, d});
  CHECK(lateral[2] == Approx(0.5 * kK / (2.0 * std::sqrt(2.0) * d * d * d)).epsilon(1e-13));

  const auto far = dipole_field_kernel({d, 0}, {0, 0, 2.0 * d});
  const auto farther = dipole_field_kernel({2.0 * d, 0}, {0, 0, 4.0 * d});
  for (int k = 0; k < 3; ++k) CHECK(farther[k] == Approx(far[k] / 8.0).epsilon(1e-14));

  CHECK_THROWS_AS(dipole_field_kernel({0, 0}, {0, 0, 0}), DomainError);
  CHECK_THROWS_AS(dipole_field_kernel({0, 0}, {1, 0, -1}), DomainError);
}

TEST_CASE("plane constants") {
  const double k1 = kernel_integral_constant(1.0);
  const double k2 = kernel_integral_constant(2.0);
  CHECK(std::abs(k1 - k2) <= 1e-6 * k1);
  CHECK(std::abs(k1 - 3.0 * units::kPi / 4.0) <= 1e-8 * k1);
  CHECK(kernel_integral_constant(1e-5) == Approx(k1).epsilon(1e-6));
  CHECK(kSurfaceAverageConstant == 0.375);
}

TEST_CASE("analytic field noise") {
  const double s_mu = 1e-9 * units::debye * units::debye;
  const double a = analytic_field_noise(1e18, s_mu, 10e-6);
  CHECK(a == Approx(0.375 * 1e18 * kK * kK * s_mu / 1e-20).epsilon(1e-14));
  CHECK(analytic_field_noise(1e18, s_mu, 20e-6) == Approx(a / 16.0).epsilon(1e-14));
  CHECK(analytic_field_noise(1e18, 0.0, 10e-6) == 0.0);
  CHECK(plane_field_noise(2.0 * 0.375, 1e18, s_mu, 10e-6) == Approx(2.0 * a).epsilon(1e-14));
  CHECK_THROWS_AS(analytic_field_noise(1e18, s_mu, 0.0), DomainError);
}

TEST_CASE("surface sampling") {
  const SurfaceSample s = sample_surface(100, 100 * kD0, kD0, 7);
  REQUIRE(s.size() == 100);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.xs[i] >= 0.0);
    CHECK(s.xs[i] <= s.extent);
    CHECK(s.ys[i] >= 0.0);
    CHECK(s.ys[i] <= s.extent);
    for (std::size_t j = 0; j < i; ++j)
      CHECK(std::hypot(s.xs[i] - s.xs[j], s.ys[i] - s.ys[j]) >= kD0);
  }
  CHECK(s.density() == Approx(100.0 / (1e-4 * 1e-4)));

  const SurfaceSample one = sample_surface(1, 100 * kD0, 50 * kD0, 3);
  CHECK(one.size() == 1);

  const SurfaceSample again = sample_surface(100, 100 * kD0, kD0, 7);
  const SurfaceSample other = sample_surface(100, 100 * kD0, kD0, 8);
  CHECK(again.xs == s.xs);
  CHECK(again.ys == s.ys);
  CHECK(other.xs != s.xs);

  CHECK_THROWS_AS(sample_surface(10000, 100 * kD0, kD0, 1), DomainError);
}

TEST_CASE("single dipole below the ion") {
  const double s_mu = 1e-60;
  const double d = 5 * kD0;
  const double v = mc_field_noise(single_centre(100 * kD0), s_mu, trap_at(d));
  CHECK(v == Approx(4.0 * s_mu * kK * kK / std::pow(d, 6)).epsilon(1e-13));

  const SurfaceSample s = single_centre(100 * kD0);
  const std::vector<SurfaceSample> samples{s};
  std::vector<double> distances;
  for (int k = 3; k <= 10; ++k) distances.push_back(k * kD0);
  const ScalingFit fit = distance_scaling_fit(samples, s_mu, trap_at(d), distances);
  CHECK(fit.exponent == Approx(-6.0).epsilon(1e-10));
}

TEST_CASE("Monte Carlo linearity, additivity and isotropy") {
  const SurfaceSample s = sample_surface(100, 100 * kD0, kD0, 11);
  const TrapConfig t = trap_at(6 * kD0);
  const double v = mc_field_noise(s, 1e-60, t);
  CHECK(mc_field_noise(s, 2e-60, t) == Approx(2.0 * v).epsilon(1e-14));

  SurfaceSample a = s, b = s;
  a.xs.resize(40);
  a.ys.resize(40);
  b.xs.erase(b.xs.begin(), b.xs.begin() + 40);
  b.ys.erase(b.ys.begin(), b.ys.begin() + 40);
  CHECK(mc_field_noise(a, 1e-60, t) + mc_field_noise(b, 1e-60, t) ==
        Approx(v).epsilon(1e-13));

  SurfaceSample rotated = s;
  const double c = 0.5 * s.extent, phi = 0.7;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = s.xs[i] - c, y = s.ys[i] - c;
    rotated.xs[i] = c + std::cos(phi) * x - std::sin(phi) * y;
    rotated.ys[i] = c + std::sin(phi) * x + std::cos(phi) * y;
  }
  CHECK(std::abs(mc_field_noise(rotated, 1e-60, t) - v) <= 1e-12 * v);
}

TEST_CASE("seed-averaged Monte Carlo matches the plane integral") {
  std::vector<SurfaceSample> samples;
  for (std::uint64_t k = 0; k < 200; ++k) samples.push_back(sample_surface(100, 100 * kD0, kD0, 1 + k));
  const double s_mu = 1e-60;
  const double k_plane = kernel_integral_constant();
  const double sigma = samples[0].density();
  for (double d : {3 * kD0, 5 * kD0, 10 * kD0}) {
    CAPTURE(d);
    double mean = 0.0;
    for (const auto& s : samples) mean += mc_field_noise(s, s_mu, trap_at(d));
    mean /= static_cast<double>(samples.size());
    CHECK(mean == Approx(plane_field_noise(k_plane, sigma, s_mu, d)).epsilon(0.10));
  }
}

TEST_CASE("scaling window") {
  const std::vector<SurfaceSample> samples{sample_surface(100, 100 * kD0, kD0, 1)};
  const std::vector<double> bad{1 * kD0, 5 * kD0, 10 * kD0};
  CHECK_THROWS_AS(distance_scaling_fit(samples, 1e-60, trap_at(kD0), bad), AnalysisError);
  CHECK_NOTHROW(distance_scaling_fit(samples, 1e-60, trap_at(kD0), bad, true));
  const std::vector<double> two{3 * kD0, 5 * kD0};
  CHECK_THROWS_AS(distance_scaling_fit(samples, 1e-60, trap_at(kD0), two), AnalysisError);

  // Far outside the patch the cluster acts as one composite source.
  const std::vector<double> far{1e3 * kD0, 2e3 * kD0, 4e3 * kD0};
  const ScalingFit f = distance_scaling_fit(samples, 1e-60, trap_at(kD0), far, true);
  CHECK(f.exponent == Approx(-6.0).epsilon(0.01));
}

TEST_CASE("heating rate") {
  TrapConfig t = trap_at(10e-6);
  CHECK(heating_rate(t, 1e-12) == Approx(2.9e2).epsilon(0.01));
  CHECK(heating_rate(t, 1e-12) == Approx(291.63).epsilon(1e-4));
  CHECK(heating_rate(t, 0.0) == 0.0);
  const double r = heating_rate(t, 1e-12);
  t.trap_frequency *= 0.5;
  CHECK(heating_rate(t, 1e-12) == Approx(2.0 * r).epsilon(1e-14));
  CHECK_THROWS_AS(heating_rate(t, -1.0), DomainError);
}

TEST_CASE("trap validation") {
  TrapConfig t = trap_at(10e-6);
  CHECK_NOTHROW(validate(t));
  t.axis = {0.0, 0.6, 0.8};
  CHECK_NOTHROW(validate(t));
  t.axis = {0.0, 0.0, 2.0};
  CHECK_THROWS_AS(validate(t), ConfigError);
  t = trap_at(0.0);
  CHECK_THROWS_AS(validate(t), ConfigError);
}
