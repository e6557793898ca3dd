#include "tpca/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tpca::kernels {

namespace detail {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sq_dist_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

void axpby_scalar(double* out, double a, const double* x, double b, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void axpbypcz_scalar(double* out, double a, const double* x, double b, const double* y, double c,
                     const double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i] + c * z[i];
}

}  // namespace detail

namespace {

constexpr KernelTable kScalar{detail::dot_scalar, detail::sq_dist_scalar, detail::axpby_scalar,
                              detail::axpbypcz_scalar};
#if TPCA_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{detail::dot_avx2, detail::sq_dist_avx2, detail::axpby_avx2,
                            detail::axpbypcz_avx2};
#endif

Isa detect() {
  if (const char* env = std::getenv("TPCA_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && cpu_supports(Isa::avx2)) return Isa::avx2;
  }
  return cpu_supports(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if TPCA_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!cpu_supports(isa)) throw std::runtime_error("kernel ISA not supported on this CPU");
#if TPCA_HAVE_AVX2_KERNELS
  if (isa == Isa::avx2) return kAvx2;
#endif
  return kScalar;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace tpca::kernels
