#include "adnoise/kernels.hpp"

#include <cmath>

namespace adnoise::kernels::scalar {

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i] * c[i];
  return sum;
}

void lorentzian_sum(const double* rates, const double* weights, std::size_t n_modes,
                    const double* omegas, double* out, std::size_t n_omegas) {
  for (std::size_t j = 0; j < n_omegas; ++j) {
    const double w2 = omegas[j] * omegas[j];
    double s = 0.0;
    for (std::size_t k = 0; k < n_modes; ++k) {
      // Same operation order as the vector paths, so results match bit for bit.
      const double lam = rates[k];
      s += (weights[k] * 2.0 * lam) / std::fma(lam, lam, w2);
    }
    out[j] = s;
  }
}

double vertical_dipole_power(const double* xs, const double* ys, std::size_t n,
                             Point3 ion, Point3 axis) {
  double sum = 0.0;
  const double h = ion.z;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = ion.x - xs[i];
    const double dy = ion.y - ys[i];
    const double r2 = dx * dx + dy * dy + h * h;
    const double inv_r2 = 1.0 / r2;
    const double inv_r3 = inv_r2 * std::sqrt(inv_r2);
    // E = (3 (z.r) r / r^2 - z) / r^3 for a unit dipole along z.
    const double a_dot_r = axis.x * dx + axis.y * dy + axis.z * h;
    const double e = (3.0 * h * a_dot_r * inv_r2 - axis.z) * inv_r3;
    sum += e * e;
  }
  return sum;
}

}  // namespace adnoise::kernels::scalar
