#include <cstdlib>
#include <stdexcept>
#include <string>

#include "adnoise/kernels.hpp"

namespace adnoise::kernels {

namespace {

constexpr KernelTable kScalar{&scalar::dot3, &scalar::lorentzian_sum,
                              &scalar::vertical_dipole_power};
#if defined(ADNOISE_HAVE_AVX2_TU)
constexpr KernelTable kAvx2{&avx2::dot3, &avx2::lorentzian_sum,
                            &avx2::vertical_dipole_power};
#endif
#if defined(ADNOISE_HAVE_NEON_TU)
constexpr KernelTable kNeon{&neon::dot3, &neon::lorentzian_sum,
                            &neon::vertical_dipole_power};
#endif

Isa detect() {
  if (const char* forced = std::getenv("ADNOISE_ISA")) {
    const std::string tag(forced);
    if (tag == "scalar") return Isa::scalar;
    if (tag == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
    if (tag == "neon" && isa_available(Isa::neon)) return Isa::neon;
  }
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

const KernelTable& active_table() {
  static const KernelTable& t = table(active_isa());
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(ADNOISE_HAVE_AVX2_TU)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(ADNOISE_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("kernel ISA not available: " + std::string(isa_name(isa)));
  switch (isa) {
#if defined(ADNOISE_HAVE_AVX2_TU)
    case Isa::avx2: return kAvx2;
#endif
#if defined(ADNOISE_HAVE_NEON_TU)
    case Isa::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

double dot3(std::span<const double> a, std::span<const double> b,
            std::span<const double> c) {
  if (a.size() != b.size() || a.size() != c.size())
    throw std::invalid_argument("dot3: length mismatch");
  return active_table().dot3(a.data(), b.data(), c.data(), a.size());
}

void lorentzian_sum(std::span<const double> rates, std::span<const double> weights,
                    std::span<const double> omegas, std::span<double> out) {
  if (rates.size() != weights.size() || omegas.size() != out.size())
    throw std::invalid_argument("lorentzian_sum: length mismatch");
  active_table().lorentzian_sum(rates.data(), weights.data(), rates.size(),
                                omegas.data(), out.data(), omegas.size());
}

double vertical_dipole_power(std::span<const double> xs, std::span<const double> ys,
                             Point3 ion, Point3 axis) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("vertical_dipole_power: length mismatch");
  return active_table().vertical_dipole_power(xs.data(), ys.data(), xs.size(), ion, axis);
}

}  // namespace adnoise::kernels
