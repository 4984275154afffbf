#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qk/errors.hpp"
#include "qk/simd.hpp"

namespace qk {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using cspan = std::span<const cplx>;
using mspan = std::span<cplx>;

inline cplx dot(cspan x, cspan y) {
  return simd::active().dotc(x.data(), y.data(), x.size());
}

inline double norm_sq(cspan x) {
  return simd::active().nrm2sq(x.data(), x.size());
}

inline double norm(cspan x) { return std::sqrt(norm_sq(x)); }

inline void axpy(cplx a, cspan x, mspan y) {
  simd::active().axpy(a, x.data(), y.data(), x.size());
}

inline void scale(cplx a, mspan x) {
  simd::active().scal(a, x.data(), x.size());
}

/// Declared 2x2 split of C^n, n = n1 + n2.
struct BlockStructure {
  std::size_t n1 = 0;
  std::size_t n2 = 0;

  std::size_t n() const { return n1 + n2; }
  std::size_t size(int block) const { return block == 0 ? n1 : n2; }

  bool operator==(const BlockStructure&) const = default;
};

/// Vector in C^n carrying the block split. Stored contiguously so splitting
/// and rejoining are views, not copies.
class BlockVector {
public:
  BlockVector() = default;

  explicit BlockVector(BlockStructure s) : s_(s), v_(s.n(), cplx{0.0, 0.0}) {}

  BlockVector(BlockStructure s, cvec data) : s_(s), v_(std::move(data)) {
    if (v_.size() != s_.n())
      throw DimensionMismatch("block vector data does not match split");
  }

  BlockVector(cvec part1, cvec part2)
      : s_{part1.size(), part2.size()}, v_(std::move(part1)) {
    v_.insert(v_.end(), part2.begin(), part2.end());
  }

  const BlockStructure& structure() const { return s_; }
  std::size_t size() const { return v_.size(); }

  cspan full() const { return {v_.data(), v_.size()}; }
  mspan full() { return {v_.data(), v_.size()}; }

  cspan part(int block) const {
    return block == 0 ? cspan{v_.data(), s_.n1}
                      : cspan{v_.data() + s_.n1, s_.n2};
  }
  mspan part(int block) {
    return block == 0 ? mspan{v_.data(), s_.n1}
                      : mspan{v_.data() + s_.n1, s_.n2};
  }

  cplx& operator[](std::size_t i) { return v_[i]; }
  const cplx& operator[](std::size_t i) const { return v_[i]; }

  double norm() const { return qk::norm(full()); }
  double norm_sq() const { return qk::norm_sq(full()); }

  void set_zero() { std::fill(v_.begin(), v_.end(), cplx{0.0, 0.0}); }

  BlockVector& operator+=(const BlockVector& o) {
    axpy(cplx{1.0, 0.0}, o.full(), full());
    return *this;
  }
  BlockVector& operator-=(const BlockVector& o) {
    axpy(cplx{-1.0, 0.0}, o.full(), full());
    return *this;
  }
  BlockVector& operator*=(cplx a) {
    scale(a, full());
    return *this;
  }

private:
  BlockStructure s_;
  cvec v_;
};

inline BlockVector operator+(BlockVector a, const BlockVector& b) {
  a += b;
  return a;
}

inline BlockVector operator-(BlockVector a, const BlockVector& b) {
  a -= b;
  return a;
}

inline BlockVector operator*(cplx a, BlockVector x) {
  x *= a;
  return x;
}

inline cplx dot(const BlockVector& x, const BlockVector& y) {
  return dot(x.full(), y.full());
}

}  // namespace qk
