#include "doctest.h"

#include <cmath>

#include "adnoise/errors.hpp"
#include "adnoise/potential.hpp"
#include "adnoise/units.hpp"

using namespace adnoise;
using namespace adnoise::potential;
using doctest::Approx;

namespace {

SurfacePotentialParams ne() { return preset("Ne-Au").params; }

double two_pi() { return 2.0 * units::kPi; }

}  // namespace

TEST_CASE("presets") {
  CHECK(ne().depth == Approx(12e-3 * units::electronvolt));
  CHECK(ne().equilibrium == Approx(6.05 * units::a0));
  CHECK(ne().mass == Approx(20.0 * units::amu));
  CHECK(preset("H-Au").params.depth == Approx(2.0 * units::electronvolt));
  const BulkMaterial au = material_preset("Au");
  CHECK(au.density == Approx(19.3e3));
  CHECK(au.speed_of_sound == Approx(3962.0));
  CHECK(au.debye_frequency == Approx(3.6e12));
  CHECK_THROWS_AS(preset("Xe-Pt"), ConfigError);
  CHECK_THROWS_AS(material_preset("Pt"), ConfigError);

  const Preset k = preset("K-surface");
  CHECK(k.beta_required);
  CHECK(std::isnan(k.params.inverse_range));
  CHECK_THROWS_AS(validate(k.params), ConfigError);
  CHECK_NOTHROW(validate(ne()));
  CHECK_NOTHROW(validate(preset("H-Au").params));
  CHECK(preset_names().size() == 3);

  const SurfacePotentialParams text = ne_au_text_variant();
  CHECK(text.equilibrium == Approx(3.1e-10));
  CHECK(text.inverse_range == Approx(1.86e10));
}

TEST_CASE("validation rejects unphysical parameters") {
  SurfacePotentialParams p = ne();
  p.inverse_range = 3.5 / p.equilibrium;
  CHECK_THROWS_AS(validate(p), DomainError);
  p = ne();
  p.depth = -1.0;
  CHECK_THROWS_AS(validate(p), ConfigError);
  CHECK_THROWS_AS(evaluate(ne(), 0.0), DomainError);
  CHECK_THROWS_AS(derivative(ne(), -1e-10), DomainError);
}

TEST_CASE("evaluate") {
  const SurfacePotentialParams p = ne();
  CHECK(evaluate(p, p.equilibrium) == Approx(-p.depth).epsilon(1e-14));
  const double z2 = 2.0 * p.equilibrium;
  CHECK(evaluate(p, z2) == Approx(-c3(p) / (z2 * z2 * z2)).epsilon(0.03));
  for (double f : {50.0, 200.0, 1000.0}) {
    const double z = f * p.equilibrium;
    CHECK(-z * z * z * evaluate(p, z) == Approx(c3(p)).epsilon(1e-9));
  }
}

TEST_CASE("single interior minimum at z0 and a finite inner barrier") {
  const SurfacePotentialParams p = ne();
  const InnerBarrier top = inner_barrier(p);
  CHECK(top.position > 0.0);
  CHECK(top.position < p.equilibrium);
  CHECK(top.height > 0.0);
  // Dense scan between the barrier top and far out: one minimum, at z0.
  int minima = 0;
  double where = 0.0;
  const int n = 200000;
  const double lo = top.position, hi = 20.0 * p.equilibrium;
  double prev = evaluate(p, lo), cur = evaluate(p, lo + (hi - lo) / n);
  for (int i = 2; i <= n; ++i) {
    const double next = evaluate(p, lo + (hi - lo) * i / n);
    if (cur < prev && cur < next) {
      ++minima;
      where = lo + (hi - lo) * (i - 1) / n;
    }
    prev = cur;
    cur = next;
  }
  CHECK(minima == 1);
  CHECK(where == Approx(p.equilibrium).epsilon(1e-3));
  CHECK(evaluate(p, 1e3 * p.equilibrium) < 0.0);
  CHECK(evaluate(p, 1e3 * p.equilibrium) > -1e-8 * p.depth);
  // Inside the barrier the -C3/z^3 term wins again.
  CHECK(evaluate(p, 0.05 * p.equilibrium) < -p.depth);

  const double z = wall_crossing(p, 2.0 * p.depth);
  CHECK(evaluate(p, z) == Approx(2.0 * p.depth).epsilon(1e-9));
  CHECK(z > top.position);
  CHECK_THROWS_AS(wall_crossing(p, 10.0 * p.depth), DomainError);
}

TEST_CASE("derivative") {
  const SurfacePotentialParams p = ne();
  CHECK(std::abs(derivative(p, p.equilibrium)) < 1e-12 * p.depth / p.equilibrium);
  for (double f = 0.5; f <= 5.0; f += 0.125) {
    const double z = f * p.equilibrium;
    const double h = 1e-5 * z;
    const double fd = (-evaluate(p, z + 2 * h) + 8 * evaluate(p, z + h) - 8 * evaluate(p, z - h) +
                       evaluate(p, z - 2 * h)) / (12 * h);
    const double d = derivative(p, z);
    CHECK(std::abs(fd - d) <= 1e-8 * std::abs(d) + 1e-9 * p.depth / p.equilibrium);
  }
  const double z = 500.0 * p.equilibrium;
  CHECK(derivative(p, z) == Approx(3.0 * c3(p) / std::pow(z, 4)).epsilon(1e-9));

  const double h = 1e-4 * p.equilibrium;
  const double z0 = p.equilibrium;
  const double curvature =
      (evaluate(p, z0 + h) - 2.0 * evaluate(p, z0) + evaluate(p, z0 - h)) / (h * h);
  const double w = harmonic_frequency(p);
  CHECK(curvature == Approx(p.mass * w * w).epsilon(1e-5));
  CHECK(second_derivative(p, z0) == Approx(p.mass * w * w).epsilon(1e-12));
}

TEST_CASE("c3") {
  SurfacePotentialParams p = ne();
  const double b = p.reduced_range();
  const double z0 = p.equilibrium;
  CHECK(c3(p) == Approx(b * std::pow(z0, 3) * p.depth / (b - 3.0)).epsilon(1e-14));
  CHECK(c3(p) / (std::pow(z0, 3) * p.depth) == Approx(b / (b - 3.0)).epsilon(1e-14));
  SurfacePotentialParams deep = p;
  deep.inverse_range = 1e6 / z0;
  CHECK(c3(deep) == Approx(std::pow(z0, 3) * p.depth).epsilon(1e-5));
  SurfacePotentialParams twice = p;
  twice.depth *= 2.0;
  CHECK(c3(twice) == Approx(2.0 * c3(p)).epsilon(1e-14));
}

TEST_CASE("harmonic frequency") {
  const SurfacePotentialParams p = ne();
  CHECK(harmonic_frequency(p) / two_pi() == Approx(0.40e12).epsilon(0.02));
  SurfacePotentialParams heavy = p;
  heavy.mass *= 4.0;
  CHECK(harmonic_frequency(heavy) == Approx(0.5 * harmonic_frequency(p)).epsilon(1e-14));
  const double h = harmonic_frequency(preset("H-Au").params) / two_pi();
  CHECK(h > 10e12);
  CHECK(h < 100e12);
}

TEST_CASE("bound state count estimate") {
  const int n = bound_state_count_estimate(ne());
  CHECK(n >= 7);
  CHECK(n <= 10);

  // U0 = hbar nu10: nu10 scales as sqrt(U0), so U0 = (hbar w)^2 / U0_ref.
  SurfacePotentialParams p = ne();
  const double hw = units::hbar * harmonic_frequency(p);
  p.depth = hw * hw / ne().depth;
  CHECK(p.depth == Approx(units::hbar * harmonic_frequency(p)).epsilon(1e-12));
  CHECK(bound_state_count_estimate(p) == 1);

  // Doubling U0 and the mass keeps nu10 fixed.
  SurfacePotentialParams r = ne();
  r.depth *= 2.0;
  r.mass *= 2.0;
  CHECK(bound_state_count_estimate(r) ==
        static_cast<int>(std::round(2.0 * ne().depth / (units::hbar * harmonic_frequency(ne())))));
}

TEST_CASE("reduced mass") {
  CHECK(reduced_mass(20.0, 197.0) == Approx(20.0 * 197.0 / 217.0));
  CHECK(reduced_mass(1.0, 1e30) == Approx(1.0));
}
