#include "qk/simd.hpp"

#if defined(QK_HAVE_AVX2)

#include <immintrin.h>

namespace qk::simd {

namespace {

// Complex doubles are stored interleaved (re, im), two per __m256d lane
// group. All loads are unaligned; penalty on AVX2 hardware is negligible.

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
  return _mm_cvtsd_f64(s1);
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  // Negates even (real-slot) lanes: turns [xi, xr] into [-xi, xr] so a
  // single fma accumulates xr*yi - xi*yr per complex pair.
  const __m256d neg_even =
      _mm256_castsi256_pd(_mm256_set_epi64x(0, 0x8000000000000000LL, 0,
                                            0x8000000000000000LL));
  std::size_t i = 0;
  const std::size_t n2 = n / 2 * 2;
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    const __m256d xswap = _mm256_permute_pd(xv, 0b0101);
    acc_im = _mm256_fmadd_pd(_mm256_xor_pd(xswap, neg_even), yv, acc_im);
  }
  double re = hsum(acc_re);
  double im = hsum(acc_im);
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double nrm2sq_avx2(const cplx* x, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t n2 = n / 2 * 2;
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return s;
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  const std::size_t n2 = n / 2 * 2;
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    const __m256d xswap = _mm256_permute_pd(xv, 0b0101);
    // addsub: [ar*xr - ai*xi, ar*xi + ai*xr]
    const __m256d prod =
        _mm256_addsub_pd(_mm256_mul_pd(ar, xv), _mm256_mul_pd(ai, xswap));
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, prod));
  }
  const double are = a.real(), aim = a.imag();
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + are * xr - aim * xi,
            y[i].imag() + are * xi + aim * xr};
  }
}

void scal_avx2(cplx a, cplx* x, std::size_t n) {
  double* xp = reinterpret_cast<double*>(x);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  const std::size_t n2 = n / 2 * 2;
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d xswap = _mm256_permute_pd(xv, 0b0101);
    _mm256_storeu_pd(
        xp + 2 * i,
        _mm256_addsub_pd(_mm256_mul_pd(ar, xv), _mm256_mul_pd(ai, xswap)));
  }
  const double are = a.real(), aim = a.imag();
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    x[i] = {are * xr - aim * xi, are * xi + aim * xr};
  }
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels k = {dotc_avx2, nrm2sq_avx2, axpy_avx2, scal_avx2,
                            "avx2"};
  return k;
}

}  // namespace qk::simd

#endif  // QK_HAVE_AVX2
