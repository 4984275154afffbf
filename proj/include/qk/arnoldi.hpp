#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qk/blockops.hpp"
#include "qk/dense.hpp"
#include "qk/vec.hpp"

namespace qk {

struct ArnoldiOptions {
  /// Happy-breakdown threshold, relative to the candidate norm before
  /// orthogonalization.
  double breakdown_tol = 1e-12;
  /// A reduced model whose 1-norm condition estimate exceeds this is
  /// treated as singular.
  double singular_cond = 1e14;
};

enum class ArnoldiStep { Advanced, HappyBreakdown };

/// Standard Arnoldi process with classical Gram-Schmidt and one full
/// reorthogonalization pass (CGS2). Single-owner, mutated in place.
class ArnoldiProcess {
public:
  ArnoldiProcess(const BlockOperator& a, const BlockVector& r0,
                 ArnoldiOptions opt = {});

  /// Appends one basis vector and one Hessenberg column. After k calls the
  /// order-k iterates are available.
  ArnoldiStep step();

  std::size_t order() const { return hcols_.size(); }
  bool grade_reached() const { return grade_reached_; }
  double beta() const { return beta_; }
  std::size_t matvecs() const { return matvecs_; }

  /// Basis columns; size is order()+1, or order() after a happy breakdown.
  const std::vector<cvec>& basis() const { return v_; }

  /// Extended Hessenberg, (k+1) x k.
  dense::Matrix hessenberg_ext() const;
  /// Square part, k x k.
  dense::Matrix hessenberg() const;

  struct Iterate {
    BlockVector x;
    /// Residual norm implied by the reduced problem.
    double reduced_resid = 0.0;
    bool singular = false;
    double cond = 0.0;
  };

  /// Galerkin iterate x0 + V (H^{-1} beta e1). Exists only when the reduced
  /// model is nonsingular; `singular` is set otherwise and x equals x0.
  /// use_order = 0 evaluates at the current order; smaller values evaluate
  /// earlier iterates of the same process.
  Iterate fom(const BlockVector& x0, std::size_t use_order = 0) const;

  /// Residual-minimizing iterate from the reduced least squares problem.
  Iterate gmres(const BlockVector& x0) const;

  /// Rank-1 modification of the square model whose eigenvalues are the
  /// harmonic Ritz values. Empty when the square model is singular.
  std::optional<dense::Matrix> gmres_rank1_model() const;

private:
  const BlockOperator& a_;
  ArnoldiOptions opt_;
  double beta_ = 0.0;
  std::vector<cvec> v_;                 // orthonormal basis columns
  std::vector<cvec> hcols_;             // column j holds H(0..j+1, j)
  bool grade_reached_ = false;
  std::size_t matvecs_ = 0;

  BlockVector lift(const BlockVector& x0, cspan coeffs) const;
};

}  // namespace qk
