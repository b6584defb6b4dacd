#include "hyperam/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace hyperam::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void hadamard(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

}  // namespace scalar

bool avx2_compiled() {
#ifdef HYPERAM_HAVE_AVX2_TU
  return true;
#else
  return false;
#endif
}

bool avx2_usable() {
#if defined(HYPERAM_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

Kernels pick_backend() {
  const Kernels scalar_k{scalar::dot, scalar::axpy, scalar::hadamard, "scalar"};
#ifdef HYPERAM_HAVE_AVX2_TU
  const Kernels avx2_k{avx2::dot, avx2::axpy, avx2::hadamard, "avx2"};
  if (const char* env = std::getenv("HYPERAM_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return scalar_k;
    if (std::strcmp(env, "avx2") == 0 && avx2_usable()) return avx2_k;
    return scalar_k;
  }
  if (avx2_usable()) return avx2_k;
#else
  if (const char* env = std::getenv("HYPERAM_KERNELS")) (void)env;
#endif
  return scalar_k;
}

}  // namespace

const Kernels& active() {
  static const Kernels chosen = pick_backend();
  return chosen;
}

}  // namespace hyperam::kernels
