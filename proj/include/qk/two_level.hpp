#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qk/blockops.hpp"
#include "qk/dense.hpp"
#include "qk/rng.hpp"
#include "qk/vec.hpp"

namespace qk {

struct TwoLevelOptions {
  /// Near-breakdown threshold for block candidates (relative to the
  /// candidate norm) and for the global subdiagonal (relative to the
  /// pre-orthogonalization scale).
  double breakdown_tol = 1e-12;
  /// Condition estimate above which the square reduced model is treated as
  /// singular.
  double singular_cond = 1e14;
  /// Relative threshold for rank detection in the extended least squares.
  double rankdef_rcond = 1e-12;
  /// Seed for replacement directions (and the random start when a block of
  /// the right-hand side vanishes).
  std::uint64_t seed = 0x2545F4914F6CDD1DULL;
  /// Accumulate the triangular-coupling and block-Hessenberg residuals
  /// after every step (tests and the acceptance suite turn this on).
  bool track_invariants = false;
};

enum class TwoLevelStep {
  Advanced,       ///< basis extended, next order available
  GradeReached,   ///< global subdiagonal vanished: Krylov space is invariant
  SpaceComplete,  ///< both block bases span their full coordinate space
};

/// Per-step record of degenerate-direction handling.
struct StepEvents {
  bool replaced[2] = {false, false};  ///< block got a random direction
  bool frozen[2] = {false, false};    ///< block basis is complete (d_i = n_i)
  bool serious = false;  ///< both block candidates vanished, global one not
};

/// Square and extended reduced models of the block operator on the product
/// of the componentwise Krylov projections.
struct QuadModel {
  dense::Matrix hx;   ///< (d1+d2) x (d1+d2)
  dense::Matrix hxu;  ///< extended rows, one extra row per growing block
  cvec bx;            ///< [||r0_1|| e1; ||r0_2|| e1] at hx row sizes
  cvec bx_ext;        ///< same at hxu row sizes
  std::size_t d[2] = {0, 0};      ///< per-block model dimension
  std::size_t d_ext[2] = {0, 0};  ///< per-block extended row count
};

/// Two-level orthogonal Arnoldi process. Maintains per-block orthonormal
/// bases V1, V2 with triangular couplings R1, R2 (so [V1 R1; V2 R2] is the
/// standard Arnoldi basis), the global Hessenberg, and cached block products
/// W_ij = A_ij V_j, Z_ij = V_i^* A_ij V_j. One operator application per
/// step; all iterates and their residuals come from the caches.
///
/// Single-owner, mutated in place; independent instances can run on
/// separate threads without coordination.
class TwoLevelProcess {
public:
  TwoLevelProcess(const BlockOperator& a, const BlockVector& r0,
                  TwoLevelOptions opt = {});

  /// Performs one iteration: one multiplication with each block, candidate
  /// orthogonalization per block (random replacement on a degenerate
  /// direction), and the triangular/Hessenberg updates. After k successful
  /// calls the order-k iterates are available.
  TwoLevelStep step();

  std::size_t order() const { return k_; }
  bool finished() const { return finished_; }
  double beta() const { return beta_; }
  std::size_t matvecs() const { return matvecs_; }

  std::size_t block_dim(int i) const { return v_[i].size(); }
  std::size_t model_dim(int i, std::size_t ord) const;

  const std::vector<StepEvents>& events() const { return events_; }
  const std::vector<std::string>& event_log() const { return event_log_; }
  bool any_replacement() const { return any_replacement_; }

  /// Largest Frobenius deviation of R1^*R1 + R2^*R2 from the identity seen
  /// so far (requires track_invariants).
  double max_sum_r_residual() const { return max_sum_r_; }
  /// Largest Frobenius deviation of H_i from R_i H seen so far.
  double max_coupling_residual() const { return max_hk_; }

  /// Reduced models at order ord (0 = current order).
  QuadModel quad_model(std::size_t ord = 0) const;
  /// Global extended Hessenberg at the current order, (k+1) x k.
  dense::Matrix hu_ext() const;
  /// Triangular coupling R_i with cols columns (rectangular once a block
  /// basis is complete).
  dense::Matrix r_factor(int i, std::size_t cols) const;
  /// Block Hessenberg H_i at the current order.
  dense::Matrix hi_ext(int i) const;
  /// Basis columns of block i.
  const std::vector<cvec>& basis(int i) const { return v_[i]; }

  struct Iterate {
    BlockVector x;
    BlockVector r;  ///< b - A x, assembled from the cached products
    double rnorm = 0.0;
    bool singular = false;        ///< square model singular (x == x0)
    bool rank_deficient = false;  ///< extended model lost rank
    double cond = 0.0;            ///< condition estimate of the square model
  };

  /// Galerkin iterate over the product space:
  /// x0 + V_x (Hx^{-1} bx). `singular` set when the model condition
  /// estimate is beyond the threshold.
  Iterate qfom(const BlockVector& x0, std::size_t ord = 0) const;

  /// Least squares iterate minimizing the residual projection onto the
  /// next product space (minimum-norm solution on rank deficiency).
  Iterate qqgmres(const BlockVector& x0, std::size_t ord = 0) const;

  /// Standard GMRES iterate recovered from the embedded global Hessenberg.
  Iterate gmres_embedded(const BlockVector& x0, std::size_t ord = 0) const;

  /// True product-space residual minimizer, solved densely against the
  /// cached A V_x columns. Cost grows with n; intended for testing.
  Iterate qgmres_reference(const BlockVector& x0, std::size_t ord = 0) const;

private:
  const BlockOperator& a_;
  TwoLevelOptions opt_;
  BlockVector r0_;
  double beta_ = 0.0;
  double b_norm_[2] = {0.0, 0.0};

  std::vector<cvec> v_[2];              // basis columns per block
  std::vector<cvec> w_[2][2];           // W_ij columns (A_ij v_j^t)
  std::vector<cvec> z_[2][2];           // Z_ij columns, rows grow in place
  std::vector<cvec> rcols_[2];          // R_i columns (ragged triangular)
  std::vector<cvec> hucols_;            // global Hessenberg columns
  std::vector<cvec> hicols_[2];         // block Hessenberg columns

  std::size_t k_ = 0;
  bool finished_ = false;
  TwoLevelStep last_status_ = TwoLevelStep::Advanced;
  bool any_replacement_ = false;
  std::size_t matvecs_ = 0;
  Rng rng_;
  std::vector<StepEvents> events_;
  std::vector<std::string> event_log_;
  double max_sum_r_ = 0.0;
  double max_hk_ = 0.0;

  cvec r_times(int i, cspan y, std::size_t cols) const;   // R_i y
  cvec r_adjoint_times(int i, cspan y, std::size_t cols) const;  // R_i^* y
  cvec random_orthonormal(int i);
  void record_invariants();
  Iterate lift(const BlockVector& x0, cspan zeta1, cspan zeta2) const;
};

/// Residual-optimal interpolation between two iterates of the same system.
struct Interpolation {
  double alpha = 1.0;
  BlockVector x;
  double rnorm = 0.0;
  bool degenerate = false;  ///< residuals coincide; x_g returned unchanged
};

/// Caller supplies the true residuals r_g = b - A x_g, r_q = b - A x_q.
Interpolation interpolate_optimal(const BlockVector& x_g,
                                  const BlockVector& x_q,
                                  const BlockVector& r_g,
                                  const BlockVector& r_q,
                                  double degenerate_tol = 1e-12);

}  // namespace qk
