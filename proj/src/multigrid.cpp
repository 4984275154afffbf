#include "qk/multigrid.hpp"

#include <cmath>

#include "qk/arnoldi.hpp"
#include "qk/errors.hpp"
#include "qk/rng.hpp"
#include "qk/two_level.hpp"

namespace qk {

namespace {

bool power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

GridHierarchy GridHierarchy::hain_lust_hierarchy(std::size_t n_fine) {
  if (!power_of_two(n_fine + 1) || n_fine < 7)
    throw BadLevels("hierarchy needs N + 1 a power of two and N >= 7");
  GridHierarchy h;
  for (std::size_t n = n_fine;; n = (n + 1) / 2 - 1) {
    h.sizes_.push_back(n);
    h.ops_.push_back(hain_lust(n));
    if (n == 7) break;
  }
  h.coarse_lu_ = dense::lu_factor(assemble_dense(*h.ops_.back()));
  return h;
}

BlockVector GridHierarchy::coarse_solve(const BlockVector& b) const {
  cvec rhs(b.full().begin(), b.full().end());
  cvec x = dense::lu_solve(coarse_lu_, std::move(rhs));
  return BlockVector(b.structure(), std::move(x));
}

BlockVector prolongate(const BlockVector& coarse, std::size_t n_coarse,
                       std::size_t n_fine) {
  if (n_fine + 1 != 2 * (n_coarse + 1))
    throw BadLevels("prolongate: levels are not related by coarsening");
  if (coarse.structure().n1 != n_coarse || coarse.structure().n2 != n_coarse)
    throw DimensionMismatch("prolongate: vector does not match level");
  BlockVector fine(BlockStructure{n_fine, n_fine});
  for (int blk = 0; blk < 2; ++blk) {
    const cspan c = coarse.part(blk);
    mspan f = fine.part(blk);
    for (std::size_t j = 0; j < n_coarse; ++j) f[2 * j + 1] = c[j];
    for (std::size_t j = 0; j <= n_coarse; ++j) {
      const cplx left = j == 0 ? cplx{0.0, 0.0} : c[j - 1];
      const cplx right = j == n_coarse ? cplx{0.0, 0.0} : c[j];
      f[2 * j] = 0.5 * (left + right);
    }
  }
  return fine;
}

BlockVector restrict_to_coarse(const BlockVector& fine, std::size_t n_fine,
                               std::size_t n_coarse) {
  if (n_fine + 1 != 2 * (n_coarse + 1))
    throw BadLevels("restrict: levels are not related by coarsening");
  if (fine.structure().n1 != n_fine || fine.structure().n2 != n_fine)
    throw DimensionMismatch("restrict: vector does not match level");
  BlockVector coarse(BlockStructure{n_coarse, n_coarse});
  for (int blk = 0; blk < 2; ++blk) {
    const cspan f = fine.part(blk);
    mspan c = coarse.part(blk);
    for (std::size_t j = 0; j < n_coarse; ++j)
      c[j] = f[2 * j + 1] + 0.5 * (f[2 * j] + f[2 * j + 2]);
  }
  return coarse;
}

namespace {

// nu Krylov steps on the residual equation, then one iterate; identity
// smoother when the model turns out singular.
void smooth(const BlockOperator& a, const BlockVector& b, BlockVector& x,
            const SmootherSpec& spec, std::uint64_t seed,
            std::vector<std::string>* events, std::size_t* matvecs) {
  BlockVector r = b;
  r -= a.apply(x);
  if (matvecs) ++(*matvecs);
  if (r.norm() == 0.0) return;
  BlockVector zero(r.structure());
  if (spec.kind == Method::Qfom) {
    TwoLevelOptions opt;
    opt.seed = seed;
    TwoLevelProcess proc(a, r, opt);
    for (std::size_t i = 0; i < spec.nu; ++i)
      if (proc.step() != TwoLevelStep::Advanced) break;
    if (matvecs) *matvecs += proc.matvecs();
    const auto it = proc.qfom(zero);
    if (it.singular) {
      if (events)
        events->push_back("smoother model singular, correction skipped");
      return;
    }
    x += it.x;
  } else {
    ArnoldiProcess proc(a, r);
    for (std::size_t i = 0; i < spec.nu; ++i)
      if (proc.step() != ArnoldiStep::Advanced) break;
    if (matvecs) *matvecs += proc.matvecs();
    x += proc.gmres(zero).x;
  }
}

}  // namespace

BlockVector vcycle(const GridHierarchy& hier, std::size_t level,
                   const BlockVector& b, BlockVector x,
                   const SmootherSpec& smoother, const MgOptions& opt,
                   std::vector<std::string>* events, std::size_t* matvecs) {
  if (level >= hier.levels()) throw BadLevels("vcycle: level out of range");
  if (level + 1 == hier.levels()) return hier.coarse_solve(b);

  const BlockOperator& a = hier.op(level);
  const std::size_t n = hier.level_points(level);
  const std::size_t nc = hier.level_points(level + 1);

  for (std::size_t s = 0; s < opt.pre_sweeps; ++s)
    smooth(a, b, x, smoother,
           derive_seed(opt.seed, 0x5347ULL + level * 131 + 2 * s), events,
           matvecs);

  BlockVector r = b;
  r -= a.apply(x);
  if (matvecs) ++(*matvecs);
  // Mesh-ratio weight h_f/h_c = 1/2: together with the plain adjoint this
  // is full weighting, which the re-discretized coarse operator needs
  // (the unweighted adjoint would double the coarse correction).
  BlockVector rc = restrict_to_coarse(r, n, nc);
  rc *= cplx{0.5, 0.0};
  BlockVector ec(rc.structure());
  ec = vcycle(hier, level + 1, rc, std::move(ec), smoother, opt, events,
              matvecs);
  x += prolongate(ec, nc, n);
  for (std::size_t s = 0; s < opt.post_sweeps; ++s)
    smooth(a, b, x, smoother,
           derive_seed(opt.seed, 0x5348ULL + level * 131 + 2 * s + 1), events,
           matvecs);
  return x;
}

MgResult mg_solve(const GridHierarchy& hier, const BlockVector& b,
                  const SmootherSpec& smoother, const MgOptions& opt) {
  if (opt.tol <= 0.0) throw ConfigError("mg_solve: tol must be positive");
  MgResult out{BlockVector(b.structure()), {}};
  SolveReport& rep = out.report;
  rep.record = RecordMode::Cycle;

  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    rep.relres = {0.0};
    rep.converged = true;
    rep.termination = Termination::Tolerance;
    return out;
  }
  rep.relres.push_back(1.0);

  for (std::size_t cycle = 1; cycle <= opt.max_cycles; ++cycle) {
    MgOptions copt = opt;
    copt.seed = derive_seed(opt.seed, cycle);
    out.x = vcycle(hier, 0, b, std::move(out.x), smoother, copt, &rep.events,
                   &rep.matvecs);
    BlockVector r = b;
    r -= hier.op(0).apply(out.x);
    ++rep.matvecs;
    const double relres = r.norm() / b_norm;
    rep.relres.push_back(relres);
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

}  // namespace qk
