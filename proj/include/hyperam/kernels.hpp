#pragma once

#include <cstddef>

// Flat double-array kernels behind the network inner loops (correlation
// reductions and weighted accumulation of stored patterns). Scalar versions
// are the reference; an AVX2 variant is selected at runtime when the CPU
// supports it. Set HYPERAM_KERNELS=scalar|avx2 to force a backend.
namespace hyperam::kernels {

struct Kernels {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  void (*hadamard)(double* dst, const double* a, const double* b, std::size_t n);
  const char* name;
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double* y, double a, const double* x, std::size_t n);
void hadamard(double* dst, const double* a, const double* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
// Defined only when the AVX2 translation unit is part of the build; guard
// calls with avx2_compiled().
double dot(const double* a, const double* b, std::size_t n);
void axpy(double* y, double a, const double* x, std::size_t n);
void hadamard(double* dst, const double* a, const double* b, std::size_t n);
}  // namespace avx2

bool avx2_compiled();
bool avx2_usable();  // compiled and supported by this CPU

// Backend chosen once per process.
const Kernels& active();

}  // namespace hyperam::kernels
