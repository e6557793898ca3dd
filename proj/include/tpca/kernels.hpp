#pragma once

// Dense double-precision vector kernels used in the ADMM inner loop and in
// canonical-class evaluation. Each kernel has a scalar reference version and
// an AVX2/FMA version; the active variant is chosen once at startup from the
// CPU feature flags (override with TPCA_SIMD=scalar|avx2).

#include <cstddef>
#include <span>
#include <string_view>

namespace tpca::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sq_dist)(const double* x, const double* y, std::size_t n);
  // out = a*x + b*y
  void (*axpby)(double* out, double a, const double* x, double b, const double* y, std::size_t n);
  // out = a*x + b*y + c*z
  void (*axpbypcz)(double* out, double a, const double* x, double b, const double* y, double c,
                   const double* z, std::size_t n);
};

namespace detail {
double dot_scalar(const double* x, const double* y, std::size_t n);
double sq_dist_scalar(const double* x, const double* y, std::size_t n);
void axpby_scalar(double* out, double a, const double* x, double b, const double* y, std::size_t n);
void axpbypcz_scalar(double* out, double a, const double* x, double b, const double* y, double c,
                     const double* z, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
#define TPCA_HAVE_AVX2_KERNELS 1
double dot_avx2(const double* x, const double* y, std::size_t n);
double sq_dist_avx2(const double* x, const double* y, std::size_t n);
void axpby_avx2(double* out, double a, const double* x, double b, const double* y, std::size_t n);
void axpbypcz_avx2(double* out, double a, const double* x, double b, const double* y, double c,
                   const double* z, std::size_t n);
#else
#define TPCA_HAVE_AVX2_KERNELS 0
#endif
}  // namespace detail

bool cpu_supports(Isa isa);

/// Kernel table for a specific ISA. Throws std::runtime_error if the CPU
/// cannot run it.
const KernelTable& table(Isa isa);

/// The table picked at startup.
const KernelTable& active();
Isa active_isa();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double sq_dist(std::span<const double> x, std::span<const double> y) {
  return active().sq_dist(x.data(), y.data(), x.size());
}
inline void axpby(std::span<double> out, double a, std::span<const double> x, double b,
                  std::span<const double> y) {
  active().axpby(out.data(), a, x.data(), b, y.data(), out.size());
}
inline void axpbypcz(std::span<double> out, double a, std::span<const double> x, double b,
                     std::span<const double> y, double c, std::span<const double> z) {
  active().axpbypcz(out.data(), a, x.data(), b, y.data(), c, z.data(), out.size());
}

}  // namespace tpca::kernels
