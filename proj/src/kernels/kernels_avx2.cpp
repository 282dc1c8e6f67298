// Built with -mavx2 -mfma.  Must only be entered after the dispatcher has
// confirmed AVX2 and FMA support.

#include <immintrin.h>

#include <cmath>

#include "adnoise/kernels.hpp"

namespace adnoise::kernels::avx2 {

namespace {
inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
}  // namespace

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d ab0 = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d ab1 =
        _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(ab0, _mm256_loadu_pd(c + i), acc0);
    acc1 = _mm256_fmadd_pd(ab1, _mm256_loadu_pd(c + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i] * c[i];
  return sum;
}

void lorentzian_sum(const double* rates, const double* weights, std::size_t n_modes,
                    const double* omegas, double* out, std::size_t n_omegas) {
  std::size_t j = 0;
  for (; j + 4 <= n_omegas; j += 4) {
    const __m256d om = _mm256_loadu_pd(omegas + j);
    const __m256d w2 = _mm256_mul_pd(om, om);
    __m256d s = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n_modes; ++k) {
      const __m256d lam = _mm256_set1_pd(rates[k]);
      const __m256d num = _mm256_set1_pd(weights[k] * 2.0 * rates[k]);
      const __m256d den = _mm256_fmadd_pd(lam, lam, w2);
      s = _mm256_add_pd(s, _mm256_div_pd(num, den));
    }
    _mm256_storeu_pd(out + j, s);
  }
  if (j < n_omegas) {
    scalar::lorentzian_sum(rates, weights, n_modes, omegas + j, out + j, n_omegas - j);
  }
}

double vertical_dipole_power(const double* xs, const double* ys, std::size_t n,
                             Point3 ion, Point3 axis) {
  const __m256d ix = _mm256_set1_pd(ion.x);
  const __m256d iy = _mm256_set1_pd(ion.y);
  const double h = ion.z;
  const __m256d h2 = _mm256_set1_pd(h * h);
  const __m256d ax = _mm256_set1_pd(axis.x);
  const __m256d ay = _mm256_set1_pd(axis.y);
  const __m256d azh = _mm256_set1_pd(axis.z * h);
  const __m256d az = _mm256_set1_pd(axis.z);
  const __m256d three_h = _mm256_set1_pd(3.0 * h);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(ix, _mm256_loadu_pd(xs + i));
    const __m256d dy = _mm256_sub_pd(iy, _mm256_loadu_pd(ys + i));
    const __m256d r2 = _mm256_fmadd_pd(dx, dx, _mm256_fmadd_pd(dy, dy, h2));
    const __m256d inv_r2 = _mm256_div_pd(one, r2);
    const __m256d inv_r3 = _mm256_mul_pd(inv_r2, _mm256_sqrt_pd(inv_r2));
    const __m256d a_dot_r = _mm256_fmadd_pd(ax, dx, _mm256_fmadd_pd(ay, dy, azh));
    const __m256d e = _mm256_mul_pd(
        _mm256_fmsub_pd(_mm256_mul_pd(three_h, a_dot_r), inv_r2, az), inv_r3);
    acc = _mm256_fmadd_pd(e, e, acc);
  }
  double sum = hsum(acc);
  if (i < n) sum += scalar::vertical_dipole_power(xs + i, ys + i, n - i, ion, axis);
  return sum;
}

}  // namespace adnoise::kernels::avx2
