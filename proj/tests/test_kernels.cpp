#include <cmath>
#include <vector>

#include "doctest.h"
#include "qk/rng.hpp"
#include "qk/simd.hpp"

using qk::Rng;
using qk::simd::cplx;
using qk::simd::Kernels;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::uint64_t seed) {
  std::vector<cplx> v(n);
  Rng rng(seed);
  for (cplx& x : v) x = rng.next_cnormal();
  return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 33, 64, 1000,
                              1023};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar dotc against a plain loop") {
  const auto& k = qk::simd::scalar_kernels();
  const auto x = random_vec(37, 1);
  const auto y = random_vec(37, 2);
  cplx expect{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) expect += std::conj(x[i]) * y[i];
  const cplx got = k.dotc(x.data(), y.data(), x.size());
  CHECK(std::abs(got - expect) < 1e-13 * std::abs(expect));
}

TEST_CASE("avx2 kernels match scalar kernels on all sizes") {
  if (!qk::simd::avx2_available()) {
    MESSAGE("avx2 not available, skipping equivalence");
    return;
  }
  const Kernels& s = qk::simd::scalar_kernels();
  const Kernels& a = qk::simd::avx2_kernels();
  for (const std::size_t n : kSizes) {
    CAPTURE(n);
    const auto x = random_vec(n, 100 + n);
    const auto y = random_vec(n, 200 + n);
    const double scale = std::sqrt(static_cast<double>(n) + 1.0);

    const cplx ds = s.dotc(x.data(), y.data(), n);
    const cplx da = a.dotc(x.data(), y.data(), n);
    CHECK(std::abs(ds - da) <= 1e-12 * scale);

    const double ns = s.nrm2sq(x.data(), n);
    const double na = a.nrm2sq(x.data(), n);
    CHECK(std::abs(ns - na) <= 1e-12 * (ns + 1.0));

    const cplx alpha{0.7, -1.3};
    auto ys = y, ya = y;
    s.axpy(alpha, x.data(), ys.data(), n);
    a.axpy(alpha, x.data(), ya.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(ys[i] - ya[i]) <= 1e-14 * (std::abs(ys[i]) + 1.0));

    auto xs = x, xa = x;
    s.scal(alpha, xs.data(), n);
    a.scal(alpha, xa.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(xs[i] - xa[i]) <= 1e-14 * (std::abs(xs[i]) + 1.0));
  }
}

TEST_CASE("active kernel set is selectable") {
  const Kernels& before = qk::simd::active();
  qk::simd::set_active(&qk::simd::scalar_kernels());
  CHECK(std::string(qk::simd::active().name) == "scalar");
  qk::simd::set_active(nullptr);
  CHECK(qk::simd::active().name == before.name);
}

TEST_CASE("dotc and nrm2sq are consistent, axpy with zero is a no-op") {
  const Kernels& k = qk::simd::active();
  const auto x = random_vec(129, 7);
  const cplx d = k.dotc(x.data(), x.data(), x.size());
  const double n2 = k.nrm2sq(x.data(), x.size());
  CHECK(std::abs(d.real() - n2) <= 1e-12 * n2);
  CHECK(std::abs(d.imag()) <= 1e-12 * n2);

  auto y = random_vec(129, 8);
  const auto y0 = y;
  k.axpy(cplx{0.0, 0.0}, x.data(), y.data(), y.size());
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(y[i] == y0[i]);
}

TEST_CASE("dotc conjugate symmetry") {
  const Kernels& k = qk::simd::active();
  const auto x = random_vec(64, 11);
  const auto y = random_vec(64, 12);
  const cplx a = k.dotc(x.data(), y.data(), 64);
  const cplx b = k.dotc(y.data(), x.data(), 64);
  CHECK(std::abs(a - std::conj(b)) <= 1e-12);
}

}  // TEST_SUITE
