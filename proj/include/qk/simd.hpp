#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace qk::simd {

using cplx = std::complex<double>;

/// Table of complex level-1 kernels. The Krylov processes spend most of
/// their time in these four loops (orthogonalization panels and residual
/// updates), so they exist in a scalar reference version and, on x86,
/// an AVX2+FMA version selected at runtime.
struct Kernels {
  /// sum_i conj(x_i) * y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  /// sum_i |x_i|^2
  double (*nrm2sq)(const cplx* x, std::size_t n);
  /// y_i += a * x_i
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  /// x_i *= a
  void (*scal)(cplx a, cplx* x, std::size_t n);
  const char* name;
};

/// Scalar reference kernels; always available.
const Kernels& scalar_kernels();

/// AVX2+FMA kernels. Only callable if compiled in and supported by the CPU.
const Kernels& avx2_kernels();

/// True when the binary carries AVX2 kernels and the CPU supports them.
bool avx2_available();

/// The kernel set in use. Selection order: explicit set_active() override,
/// then the QK_KERNELS environment variable ("scalar" or "avx2"), then the
/// best supported set.
const Kernels& active();

/// Overrides the active kernel set (used by equivalence tests). Passing
/// nullptr restores automatic selection.
void set_active(const Kernels* k);

}  // namespace qk::simd
