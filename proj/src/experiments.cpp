#include "qk/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qk/errors.hpp"
#include "qk/matrix_market.hpp"
#include "qk/problems.hpp"

namespace qk {

std::string format_double(double v) {
  char buf[40];
  if (std::isnan(v)) return "nan";
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::unique_ptr<BlockOperator> make_problem(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::HainLust:
      return hain_lust(cfg.n);
    case ProblemKind::Schwinger: {
      GaugeField g = cfg.gauge_file.empty()
                         ? gauge_random(cfg.n, cfg.seed, cfg.mixing)
                         : load_gauge_file(cfg.gauge_file);
      return schwinger(g.extent, cfg.m0, std::move(g));
    }
    case ProblemKind::File:
      if (cfg.matrix_file.empty())
        throw ConfigError("file problem needs a matrix path");
      return load_block_matrix(cfg.matrix_file, cfg.n1);
    case ProblemKind::Extreme:
      return extreme_w2_random(
          cfg.extreme_n1, cfg.extreme_n2, cfg.lambda1, cfg.lambda2, cfg.seed,
          cfg.upper_right ? OffBlock::UpperRight : OffBlock::LowerLeft);
  }
  throw ConfigError("unknown problem kind");
}

BlockVector ones_rhs(const BlockOperator& a) {
  BlockVector e(a.structure());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = 1.0;
  return a.apply(e);
}

StudyOutcome run_convergence_study(const ExperimentConfig& cfg) {
  if (cfg.methods.empty()) throw ConfigError("no methods configured");
  const std::unique_ptr<BlockOperator> a = make_problem(cfg);
  const BlockVector b = ones_rhs(*a);
  const BlockVector x0(a->structure());

  StudyOutcome out;
  std::ostringstream csv;
  csv << "cycle,method,relres\n";
  for (const Method m : cfg.methods) {
    SolveOptions opt = cfg.solve;
    opt.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(m));
    opt.two_level.seed = opt.seed;
    const SolveResult res = solve(*a, b, x0, m, opt);
    for (std::size_t i = 0; i < res.report.relres.size(); ++i)
      csv << i << ',' << method_name(m) << ','
          << format_double(res.report.relres[i]) << '\n';
    out.all_converged = out.all_converged && res.report.converged;
    out.any_error = out.any_error ||
                    res.report.termination == Termination::SingularModel;
  }
  out.csv = csv.str();
  return out;
}

StudyOutcome run_mg_study(const MgStudyConfig& cfg) {
  StudyOutcome out;
  std::ostringstream csv;
  MgOptions opt;
  opt.tol = cfg.tol;
  opt.max_cycles = cfg.max_cycles;
  opt.seed = cfg.seed;
  if (cfg.scan) {
    csv << "N,iterations\n";
    for (std::size_t n = cfg.scan_min; n <= cfg.scan_max; n = 2 * (n + 1) - 1) {
      const GridHierarchy hier = GridHierarchy::hain_lust_hierarchy(n);
      const BlockVector b = ones_rhs(hier.op(0));
      const MgResult res = mg_solve(hier, b, cfg.smoother, opt);
      csv << n << ',' << res.report.restarts << '\n';
      out.all_converged = out.all_converged && res.report.converged;
    }
  } else {
    const GridHierarchy hier = GridHierarchy::hain_lust_hierarchy(cfg.n);
    const BlockVector b = ones_rhs(hier.op(0));
    const MgResult res = mg_solve(hier, b, cfg.smoother, opt);
    csv << "cycle,relres\n";
    for (std::size_t i = 0; i < res.report.relres.size(); ++i)
      csv << i << ',' << format_double(res.report.relres[i]) << '\n';
    out.all_converged = res.report.converged;
  }
  out.csv = csv.str();
  return out;
}

}  // namespace qk
