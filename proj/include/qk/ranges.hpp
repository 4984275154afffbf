#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "qk/blockops.hpp"
#include "qk/vec.hpp"

namespace qk {

/// Monte Carlo sample of a numerical range. Reproducible: the points depend
/// only on (operator, sample_count, seed); per-sample streams are derived
/// from the seed, never from evaluation order.
struct RangeSample {
  std::vector<cplx> points;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
};

/// Distance-to-zero estimate taken over a sample, plus a heuristic count of
/// connected components on the real axis.
struct GapEstimate {
  double delta = 0.0;
  int components_hint = 1;
};

/// Roots of (lambda - alpha)(lambda - delta) - beta*gamma = 0. The
/// larger-magnitude root comes from the stable discriminant branch, the
/// other from the product rule. Triangular inputs (beta*gamma == 0) return
/// {alpha, delta} exactly.
std::pair<cplx, cplx> eig2x2(cplx alpha, cplx beta, cplx gamma, cplx delta);

/// Rayleigh quotients <Ax, x> for unit x drawn from the rotation-invariant
/// distribution on the sphere (normalized complex Gaussians).
RangeSample sample_w(const BlockOperator& a, std::size_t samples,
                     std::uint64_t seed);

/// For each draw of unit-norm x1, x2, both eigenvalues of
/// [[x1*A11x1, x1*A12x2], [x2*A21x1, x2*A22x2]]; 2*samples points total.
RangeSample sample_w2(const BlockOperator& a, std::size_t samples,
                      std::uint64_t seed);

/// delta = min |point|. components_hint is 2 iff the sorted real parts leave
/// an empty interval wider than threshold_fraction of the real-axis span
/// that straddles a sign change (contains 0 strictly); otherwise 1.
GapEstimate gap_estimate(const RangeSample& s, double threshold_fraction = 0.1);

/// For an eigenpair (lambda, v) of A with both block components nonzero,
/// returns the 2x2 matrix built from the normalized blocks; lambda is one of
/// its eigenvalues, which places the spectrum inside the quadratic range.
/// Throws DegenerateBlock when a block norm is negligible relative to ||v||.
std::array<cplx, 4> enclosure_witness(const BlockOperator& a, cplx lambda,
                                      const BlockVector& v);

}  // namespace qk
