#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qk/problems.hpp"
#include "qk/solvers.hpp"
#include "qk/vec.hpp"

namespace qk {

/// Pre-smoother: nu Krylov steps followed by one iterate of the chosen
/// method, restarted fresh on the current residual each visit.
struct SmootherSpec {
  Method kind = Method::Qfom;  // Qfom or Gmres
  std::size_t nu = 1;
};

/// Re-discretized grid hierarchy for the coupled 1-D operator: level sizes
/// satisfy N_{l+1} + 1 = (N_l + 1)/2 down to N = 7, where the 14x14 system
/// is factored once and solved directly.
class GridHierarchy {
public:
  /// n_fine + 1 must be a power of two, n_fine >= 7.
  static GridHierarchy hain_lust_hierarchy(std::size_t n_fine);

  std::size_t levels() const { return ops_.size(); }
  std::size_t level_points(std::size_t level) const { return sizes_[level]; }
  const BlockOperator& op(std::size_t level) const { return *ops_[level]; }

  /// Direct solve at the coarsest level.
  BlockVector coarse_solve(const BlockVector& b) const;

private:
  std::vector<std::size_t> sizes_;
  std::vector<std::unique_ptr<HainLustOperator>> ops_;
  dense::Lu coarse_lu_;
};

/// Linear interpolation per block: coinciding points copy, in-between
/// points average their two coarse neighbors (Dirichlet zero boundary).
BlockVector prolongate(const BlockVector& coarse, std::size_t n_coarse,
                       std::size_t n_fine);

/// Exact adjoint of prolongate under the standard inner product.
BlockVector restrict_to_coarse(const BlockVector& fine, std::size_t n_fine,
                               std::size_t n_coarse);

struct MgOptions {
  double tol = 1e-12;
  std::size_t max_cycles = 100;
  std::uint64_t seed = 0x9E3779B97F4A7C15ULL;
  /// Smoother applications before and after the coarse correction. The
  /// multiplication block's spectrum is a circle of radius 2 around -3, so
  /// each product-space correction can cut the rough second-block error by
  /// at most 2/3; the symmetric double sweep keeps the cycle count flat in
  /// the mesh width.
  std::size_t pre_sweeps = 2;
  std::size_t post_sweeps = 2;
};

/// One V-cycle: pre_sweeps smoother applications, coarse correction,
/// post_sweeps smoother applications. A singular smoother model skips that
/// correction and is logged.
BlockVector vcycle(const GridHierarchy& hier, std::size_t level,
                   const BlockVector& b, BlockVector x,
                   const SmootherSpec& smoother, const MgOptions& opt,
                   std::vector<std::string>* events = nullptr,
                   std::size_t* matvecs = nullptr);

struct MgResult {
  BlockVector x;
  SolveReport report;
};

/// Repeated V-cycles from x = 0 until ||b - A x|| <= tol ||b||.
MgResult mg_solve(const GridHierarchy& hier, const BlockVector& b,
                  const SmootherSpec& smoother, const MgOptions& opt);

}  // namespace qk
