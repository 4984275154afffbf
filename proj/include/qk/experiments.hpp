#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qk/blockops.hpp"
#include "qk/multigrid.hpp"
#include "qk/solvers.hpp"

namespace qk {

enum class ProblemKind { HainLust, Schwinger, File, Extreme };

/// One batch experiment. All randomness flows from `seed`; equal configs
/// produce byte-identical CSV.
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::HainLust;

  std::size_t n = 1023;  ///< grid points (HainLust) or lattice extent
  double m0 = -0.1;
  double mixing = 1.0;
  std::string gauge_file;  ///< load instead of seeding when nonempty

  std::string matrix_file;
  std::size_t n1 = 0;

  std::size_t extreme_n1 = 4, extreme_n2 = 4;
  cplx lambda1{2.0, 0.0}, lambda2{5.0, 0.0};
  bool upper_right = true;

  std::vector<Method> methods = {Method::Fom, Method::Gmres, Method::Qfom,
                                 Method::Qqgmres, Method::Interp};
  SolveOptions solve;
  std::uint64_t seed = 20260101;
};

std::unique_ptr<BlockOperator> make_problem(const ExperimentConfig& cfg);

/// Right-hand side used by all studies: b = A e, e the vector of all ones.
BlockVector ones_rhs(const BlockOperator& a);

struct StudyOutcome {
  std::string csv;
  bool all_converged = true;
  bool any_error = false;  ///< a solve ended with SingularModel
};

/// Runs every configured method on the configured problem with x0 = 0 and
/// emits rows `cycle,method,relres` (iteration index in place of cycle when
/// recording per iteration).
StudyOutcome run_convergence_study(const ExperimentConfig& cfg);

struct MgStudyConfig {
  std::size_t n = 1023;
  SmootherSpec smoother;
  double tol = 1e-12;
  std::size_t max_cycles = 100;
  bool scan = false;  ///< emit `N,iterations` for N in [scan_min, scan_max]
  std::size_t scan_min = 63;
  std::size_t scan_max = 511;
  std::uint64_t seed = 20260101;
};

/// CSV `cycle,relres` for one run, or `N,iterations` rows in scan mode.
StudyOutcome run_mg_study(const MgStudyConfig& cfg);

/// Full-precision formatting used in all CSV output.
std::string format_double(double v);

}  // namespace qk
