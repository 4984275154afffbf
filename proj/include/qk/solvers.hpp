#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qk/arnoldi.hpp"
#include "qk/blockops.hpp"
#include "qk/two_level.hpp"
#include "qk/vec.hpp"

namespace qk {

enum class Method { Fom, Gmres, Qfom, Qqgmres, Interp };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

enum class Termination { Tolerance, MaxIter, Breakdown, SingularModel };
enum class RecordMode { Cycle, Iteration };

struct SolveOptions {
  std::size_t restart = 50;
  double tol = 1e-10;
  std::size_t max_restarts = 100;
  RecordMode record = RecordMode::Cycle;
  std::uint64_t seed = 0x9E3779B97F4A7C15ULL;
  ArnoldiOptions arnoldi{};
  TwoLevelOptions two_level{};
};

struct SolveReport {
  /// Relative residual history, ||b - A x|| / ||b - A x0||. Entry 0 is the
  /// starting value (1 unless r0 = 0); subsequent entries are per cycle end
  /// or per iteration depending on `record`.
  std::vector<double> relres;
  RecordMode record = RecordMode::Cycle;
  std::size_t matvecs = 0;
  std::size_t restarts = 0;
  bool converged = false;
  Termination termination = Termination::MaxIter;
  std::vector<std::string> events;
  /// Populated by the two-level methods when
  /// SolveOptions::two_level.track_invariants is on: worst observed
  /// triangular-coupling and block-Hessenberg residuals over all cycles.
  double max_sum_r = 0.0;
  double max_coupling = 0.0;
};

struct SolveResult {
  BlockVector x;
  SolveReport report;
};

/// Restarted FOM / GMRES. Cycle-end residuals are recomputed from scratch.
/// A singular FOM model at a cycle end falls back to the largest preceding
/// order whose model is nonsingular; if none exists the solve terminates
/// with Termination::SingularModel.
SolveResult restarted_solve(const BlockOperator& a, const BlockVector& b,
                            const BlockVector& x0, Method method,
                            const SolveOptions& opt);

/// Restarted QFOM / QQGMRES / interpolated QQGMRES on the shared two-level
/// process. Interp computes the embedded-Hessenberg GMRES iterate and the
/// QQGMRES iterate at each cycle end and takes the residual-optimal convex
/// combination; the next cycle restarts from the interpolated iterate.
SolveResult restarted_quad_solve(const BlockOperator& a, const BlockVector& b,
                                 const BlockVector& x0, Method method,
                                 const SolveOptions& opt);

/// Dispatches on the method family.
SolveResult solve(const BlockOperator& a, const BlockVector& b,
                  const BlockVector& x0, Method method,
                  const SolveOptions& opt);

}  // namespace qk
