#pragma once

// Data-parallel inner loops used by the physics modules.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant.  The variant is
// picked once at runtime from the CPU's capabilities; setting the environment
// variable ADNOISE_ISA=scalar forces the reference path.  The variants are
// required to agree with the scalar path to a few ulps per accumulated term
// (tests/test_kernels.cpp).

#include <cstddef>
#include <span>
#include <string_view>

namespace adnoise::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();

struct Point3 {
  double x, y, z;
};

// Raw-pointer signatures shared by every ISA variant.
struct KernelTable {
  // sum_i a[i] * b[i] * c[i]
  double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
  // out[j] = sum_k weights[k] * 2 rates[k] / (omegas[j]^2 + rates[k]^2)
  void (*lorentzian_sum)(const double* rates, const double* weights, std::size_t n_modes,
                         const double* omegas, double* out, std::size_t n_omegas);
  // sum_i (axis . E_i)^2 where E_i is the field at `ion` of a unit dipole
  // normal to the z = 0 plane located at (xs[i], ys[i], 0), without the
  // 1/(4 pi eps0) prefactor.
  double (*vertical_dipole_power)(const double* xs, const double* ys, std::size_t n,
                                  Point3 ion, Point3 axis);
};

/// Kernel table for a specific ISA.  Throws std::invalid_argument if the ISA
/// was not compiled in or is not supported by the running CPU.
const KernelTable& table(Isa isa);

// Dispatched entry points (use active_isa()).
double dot3(std::span<const double> a, std::span<const double> b,
            std::span<const double> c);
void lorentzian_sum(std::span<const double> rates, std::span<const double> weights,
                    std::span<const double> omegas, std::span<double> out);
double vertical_dipole_power(std::span<const double> xs, std::span<const double> ys,
                             Point3 ion, Point3 axis);

namespace scalar {
double dot3(const double* a, const double* b, const double* c, std::size_t n);
void lorentzian_sum(const double* rates, const double* weights, std::size_t n_modes,
                    const double* omegas, double* out, std::size_t n_omegas);
double vertical_dipole_power(const double* xs, const double* ys, std::size_t n,
                             Point3 ion, Point3 axis);
}  // namespace scalar

namespace avx2 {
double dot3(const double* a, const double* b, const double* c, std::size_t n);
void lorentzian_sum(const double* rates, const double* weights, std::size_t n_modes,
                    const double* omegas, double* out, std::size_t n_omegas);
double vertical_dipole_power(const double* xs, const double* ys, std::size_t n,
                             Point3 ion, Point3 axis);
}  // namespace avx2

namespace neon {
double dot3(const double* a, const double* b, const double* c, std::size_t n);
void lorentzian_sum(const double* rates, const double* weights, std::size_t n_modes,
                    const double* omegas, double* out, std::size_t n_omegas);
double vertical_dipole_power(const double* xs, const double* ys, std::size_t n,
                             Point3 ion, Point3 axis);
}  // namespace neon

}  // namespace adnoise::kernels
