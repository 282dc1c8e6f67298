#include <arm_neon.h>

#include "adnoise/kernels.hpp"

namespace adnoise::kernels::neon {

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t ab0 = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t ab1 = vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc0 = vfmaq_f64(acc0, ab0, vld1q_f64(c + i));
    acc1 = vfmaq_f64(acc1, ab1, vld1q_f64(c + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i] * c[i];
  return sum;
}

void lorentzian_sum(const double* rates, const double* weights, std::size_t n_modes,
                    const double* omegas, double* out, std::size_t n_omegas) {
  std::size_t j = 0;
  for (; j + 2 <= n_omegas; j += 2) {
    const float64x2_t om = vld1q_f64(omegas + j);
    const float64x2_t w2 = vmulq_f64(om, om);
    float64x2_t s = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < n_modes; ++k) {
      const float64x2_t lam = vdupq_n_f64(rates[k]);
      const float64x2_t num = vdupq_n_f64(weights[k] * 2.0 * rates[k]);
      s = vaddq_f64(s, vdivq_f64(num, vfmaq_f64(w2, lam, lam)));
    }
    vst1q_f64(out + j, s);
  }
  if (j < n_omegas) {
    scalar::lorentzian_sum(rates, weights, n_modes, omegas + j, out + j, n_omegas - j);
  }
}

double vertical_dipole_power(const double* xs, const double* ys, std::size_t n,
                             Point3 ion, Point3 axis) {
  const double h = ion.z;
  const float64x2_t ix = vdupq_n_f64(ion.x);
  const float64x2_t iy = vdupq_n_f64(ion.y);
  const float64x2_t h2 = vdupq_n_f64(h * h);
  const float64x2_t ax = vdupq_n_f64(axis.x);
  const float64x2_t ay = vdupq_n_f64(axis.y);
  const float64x2_t azh = vdupq_n_f64(axis.z * h);
  const float64x2_t az = vdupq_n_f64(axis.z);
  const float64x2_t three_h = vdupq_n_f64(3.0 * h);
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(ix, vld1q_f64(xs + i));
    const float64x2_t dy = vsubq_f64(iy, vld1q_f64(ys + i));
    const float64x2_t r2 = vfmaq_f64(vfmaq_f64(h2, dy, dy), dx, dx);
    const float64x2_t inv_r2 = vdivq_f64(one, r2);
    const float64x2_t inv_r3 = vmulq_f64(inv_r2, vsqrtq_f64(inv_r2));
    const float64x2_t a_dot_r = vfmaq_f64(vfmaq_f64(azh, ay, dy), ax, dx);
    const float64x2_t t = vmulq_f64(vmulq_f64(three_h, a_dot_r), inv_r2);
    const float64x2_t e = vmulq_f64(vsubq_f64(t, az), inv_r3);
    acc = vfmaq_f64(acc, e, e);
  }
  double sum = vaddvq_f64(acc);
  if (i < n) sum += scalar::vertical_dipole_power(xs + i, ys + i, n - i, ion, axis);
  return sum;
}

}  // namespace adnoise::kernels::neon
