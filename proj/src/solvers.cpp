#include "qk/solvers.hpp"

#include <cmath>
#include <limits>

#include "qk/errors.hpp"
#include "qk/rng.hpp"

namespace qk {

const char* method_name(Method m) {
  switch (m) {
    case Method::Fom: return "fom";
    case Method::Gmres: return "gmres";
    case Method::Qfom: return "qfom";
    case Method::Qqgmres: return "qqgmres";
    case Method::Interp: return "interp";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "fom") return Method::Fom;
  if (name == "gmres") return Method::Gmres;
  if (name == "qfom") return Method::Qfom;
  if (name == "qqgmres") return Method::Qqgmres;
  if (name == "interp") return Method::Interp;
  throw ConfigError("unknown method: " + name);
}

namespace {

BlockVector residual(const BlockOperator& a, const BlockVector& b,
                     const BlockVector& x, std::size_t* matvecs) {
  BlockVector r = b;
  r -= a.apply(x);
  if (matvecs) ++(*matvecs);
  return r;
}

}  // namespace

SolveResult restarted_solve(const BlockOperator& a, const BlockVector& b,
                            const BlockVector& x0, Method method,
                            const SolveOptions& opt) {
  if (method != Method::Fom && method != Method::Gmres)
    throw ConfigError("restarted_solve handles fom and gmres only");
  if (opt.restart < 1 || opt.tol <= 0.0)
    throw ConfigError("restart length and tolerance must be positive");

  SolveResult out{x0, {}};
  SolveReport& rep = out.report;
  rep.record = opt.record;

  BlockVector r = residual(a, b, x0, &rep.matvecs);
  const double r0_norm = r.norm();
  if (r0_norm == 0.0) {
    rep.relres = {0.0};
    rep.converged = true;
    rep.termination = Termination::Tolerance;
    return out;
  }
  rep.relres.push_back(1.0);

  for (std::size_t cycle = 1; cycle <= opt.max_restarts; ++cycle) {
    ArnoldiProcess proc(a, r, opt.arnoldi);
    bool grade = false;
    for (std::size_t it = 0; it < opt.restart; ++it) {
      const ArnoldiStep st = proc.step();
      if (opt.record == RecordMode::Iteration) {
        if (method == Method::Fom) {
          const auto fit = proc.fom(out.x);
          rep.relres.push_back(fit.singular
                                   ? std::numeric_limits<double>::quiet_NaN()
                                   : fit.reduced_resid / r0_norm);
        } else {
          rep.relres.push_back(proc.gmres(out.x).reduced_resid / r0_norm);
        }
      }
      if (st == ArnoldiStep::HappyBreakdown) {
        grade = true;
        rep.events.push_back("cycle " + std::to_string(cycle) +
                             ": happy breakdown at k=" +
                             std::to_string(proc.order()));
        break;
      }
    }
    rep.matvecs += proc.matvecs();

    if (method == Method::Fom) {
      ArnoldiProcess::Iterate it = proc.fom(out.x);
      std::size_t used = proc.order();
      // Singular cycle-end model: fall back to the last existing iterate.
      while (it.singular && used > 1) {
        --used;
        it = proc.fom(out.x, used);
      }
      if (it.singular) {
        rep.events.push_back("cycle " + std::to_string(cycle) +
                             ": no nonsingular reduced model in this cycle");
        rep.termination = Termination::SingularModel;
        rep.restarts = cycle;
        return out;
      }
      if (used < proc.order())
        rep.events.push_back("cycle " + std::to_string(cycle) +
                             ": singular model at k=" +
                             std::to_string(proc.order()) +
                             ", used iterate at k=" + std::to_string(used));
      out.x = std::move(it.x);
    } else {
      out.x = proc.gmres(out.x).x;
    }

    r = residual(a, b, out.x, &rep.matvecs);
    const double relres = r.norm() / r0_norm;
    if (opt.record == RecordMode::Cycle) rep.relres.push_back(relres);
    rep.restarts = cycle;
    if (relres <= opt.tol) {
      rep.converged = true;
      rep.termination = Termination::Tolerance;
      return out;
    }
    if (grade) {
      // Invariant subspace reached but tolerance missed; restart continues
      // from the recomputed residual.
      rep.events.push_back("cycle " + std::to_string(cycle) +
                           ": grade reached with relres above tolerance");
    }
  }
  rep.termination = Termination::MaxIter;
  return out;
}

SolveResult restarted_quad_solve(const BlockOperator& a, const BlockVector& b,
                                 const BlockVector& x0, Method method,
                                 const SolveOptions& opt) {
  if (method != Method::Qfom && method != Method::Qqgmres &&
      method != Method::Interp)
    throw ConfigError("restarted_quad_solve handles qfom/qqgmres/interp");
  if (opt.restart < 1 || opt.tol <= 0.0)
    throw ConfigError("restart length and tolerance must be positive");

  SolveResult out{x0, {}};
  SolveReport& rep = out.report;
  rep.record = opt.record;

  BlockVector r = residual(a, b, x0, &rep.matvecs);
  const double r0_norm = r.norm();
  if (r0_norm == 0.0) {
    rep.relres = {0.0};
    rep.converged = true;
    rep.termination = Termination::Tolerance;
    return out;
  }
  rep.relres.push_back(1.0);

  for (std::size_t cycle = 1; cycle <= opt.max_restarts; ++cycle) {
    TwoLevelOptions tl = opt.two_level;
    tl.seed = derive_seed(opt.seed, cycle);
    TwoLevelProcess proc(a, r, tl);
    for (std::size_t it = 0; it < opt.restart; ++it) {
      const TwoLevelStep st = proc.step();
      if (opt.record == RecordMode::Iteration) {
        double rr = std::numeric_limits<double>::quiet_NaN();
        if (method == Method::Qfom) {
          const auto qit = proc.qfom(out.x);
          if (!qit.singular) rr = qit.rnorm / r0_norm;
        } else if (method == Method::Qqgmres) {
          rr = proc.qqgmres(out.x).rnorm / r0_norm;
        } else {
          const auto g = proc.gmres_embedded(out.x);
          const auto q = proc.qqgmres(out.x);
          rr = interpolate_optimal(g.x, q.x, g.r, q.r).rnorm / r0_norm;
        }
        rep.relres.push_back(rr);
      }
      if (st != TwoLevelStep::Advanced) {
        rep.events.push_back("cycle " + std::to_string(cycle) + ": " +
                             (st == TwoLevelStep::GradeReached
                                  ? "grade reached"
                                  : "product space complete") +
                             " at k=" + std::to_string(proc.order()));
        break;
      }
    }
    rep.matvecs += proc.matvecs();
    rep.max_sum_r = std::max(rep.max_sum_r, proc.max_sum_r_residual());
    rep.max_coupling = std::max(rep.max_coupling, proc.max_coupling_residual());
    for (const std::string& ev : proc.event_log())
      rep.events.push_back("cycle " + std::to_string(cycle) + ": " + ev);

    if (method == Method::Qfom) {
      TwoLevelProcess::Iterate it = proc.qfom(out.x);
      std::size_t used = proc.order();
      while (it.singular && used > 1) {
        --used;
        it = proc.qfom(out.x, used);
      }
      if (it.singular) {
        rep.events.push_back("cycle " + std::to_string(cycle) +
                             ": no nonsingular quadratic model in this cycle");
        rep.termination = Termination::SingularModel;
        rep.restarts = cycle;
        return out;
      }
      if (used < proc.order())
        rep.events.push_back("cycle " + std::to_string(cycle) +
                             ": singular quadratic model at k=" +
                             std::to_string(proc.order()) +
                             ", used iterate at k=" + std::to_string(used));
      out.x = std::move(it.x);
    } else if (method == Method::Qqgmres) {
      TwoLevelProcess::Iterate it = proc.qqgmres(out.x);
      if (it.rank_deficient)
        rep.events.push_back("cycle " + std::to_string(cycle) +
                             ": extended model rank deficient, minimum-norm "
                             "solution used");
      out.x = std::move(it.x);
    } else {
      const auto g = proc.gmres_embedded(out.x);
      const auto q = proc.qqgmres(out.x);
      if (q.rank_deficient)
        rep.events.push_back("cycle " + std::to_string(cycle) +
                             ": extended model rank deficient, minimum-norm "
                             "solution used");
      out.x = interpolate_optimal(g.x, q.x, g.r, q.r).x;
    }

    r = residual(a, b, out.x, &rep.matvecs);
    const double relres = r.norm() / r0_norm;
    if (opt.record == RecordMode::Cycle) rep.relres.push_back(relres);
    rep.restarts = cycle;
    if (relres <= opt.tol) {
      rep.converged = true;
      rep.termination = Termination::Tolerance;
      return out;
    }
  }
  rep.termination = Termination::MaxIter;
  return out;
}

SolveResult solve(const BlockOperator& a, const BlockVector& b,
                  const BlockVector& x0, Method method,
                  const SolveOptions& opt) {
  if (method == Method::Fom || method == Method::Gmres)
    return restarted_solve(a, b, x0, method, opt);
  return restarted_quad_solve(a, b, x0, method, opt);
}

}  // namespace qk
