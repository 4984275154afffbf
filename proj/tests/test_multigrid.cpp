#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qk/errors.hpp"
#include "qk/experiments.hpp"
#include "qk/multigrid.hpp"

using namespace qk;

TEST_SUITE("multigrid") {

TEST_CASE("prolongation of a single coarse point") {
  BlockVector c({1, 1});
  c.part(0)[0] = 1.0;
  c.part(1)[0] = 1.0;
  const BlockVector f = prolongate(c, 1, 3);
  for (int blk = 0; blk < 2; ++blk) {
    CHECK(f.part(blk)[0] == cplx{0.5, 0.0});
    CHECK(f.part(blk)[1] == cplx{1.0, 0.0});
    CHECK(f.part(blk)[2] == cplx{0.5, 0.0});
  }
}

TEST_CASE("transfer operators preserve zero and are linear") {
  const BlockVector zc({7, 7});
  const BlockVector zf = prolongate(zc, 7, 15);
  CHECK(zf.norm() == 0.0);
  const BlockVector zb = restrict_to_coarse(zf, 15, 7);
  CHECK(zb.norm() == 0.0);

  const BlockVector u = oracle::random_block_vector({7, 7}, 3);
  const BlockVector v = oracle::random_block_vector({7, 7}, 4);
  const cplx al{0.4, 1.0}, be{-1.2, 0.3};
  BlockVector lin = al * u + be * v;
  const BlockVector lhs = prolongate(lin, 7, 15);
  BlockVector rhs = al * prolongate(u, 7, 15) + be * prolongate(v, 7, 15);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-14);
}

TEST_CASE("restriction is the exact adjoint of prolongation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BlockVector f = oracle::random_block_vector({15, 15}, 100 + seed);
    const BlockVector c = oracle::random_block_vector({7, 7}, 200 + seed);
    const cplx lhs = dot(restrict_to_coarse(f, 15, 7), c);
    const cplx rhs = dot(f, prolongate(c, 7, 15));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * f.norm() * c.norm());
  }
}

TEST_CASE("restriction composed with prolongation of a basis vector") {
  for (std::size_t j : {0u, 3u, 6u}) {
    BlockVector ej({7, 7});
    ej.part(0)[j] = 1.0;
    const BlockVector pf = prolongate(ej, 7, 15);
    const BlockVector back = restrict_to_coarse(pf, 15, 7);
    CHECK(std::abs(back.part(0)[j] - cplx{pf.norm_sq(), 0.0}) <= 1e-13);
  }
}

TEST_CASE("level mismatch is rejected") {
  const BlockVector c({6, 6});
  CHECK_THROWS_AS(prolongate(c, 6, 15), BadLevels);
  const BlockVector f({15, 15});
  CHECK_THROWS_AS(restrict_to_coarse(f, 15, 6), BadLevels);
}

TEST_CASE("hierarchy construction and the coarse direct solve") {
  const GridHierarchy h = GridHierarchy::hain_lust_hierarchy(63);
  REQUIRE(h.levels() == 4);
  CHECK(h.level_points(0) == 63);
  CHECK(h.level_points(1) == 31);
  CHECK(h.level_points(2) == 15);
  CHECK(h.level_points(3) == 7);
  CHECK_THROWS_AS(GridHierarchy::hain_lust_hierarchy(10), BadLevels);

  const BlockVector b = oracle::random_block_vector({7, 7}, 5);
  const BlockVector x = h.coarse_solve(b);
  BlockVector r = b;
  r -= h.op(3).apply(x);
  CHECK(r.norm() <= 1e-12 * b.norm());
}

TEST_CASE("vcycle on the zero problem returns zero") {
  const GridHierarchy h = GridHierarchy::hain_lust_hierarchy(31);
  const BlockVector b({31, 31});
  MgOptions opt;
  const BlockVector x =
      vcycle(h, 0, b, BlockVector({31, 31}), SmootherSpec{}, opt);
  CHECK(x.norm() == 0.0);
}

TEST_CASE("product-space smoothing contracts the error") {
  const GridHierarchy h = GridHierarchy::hain_lust_hierarchy(63);
  MgOptions opt;
  SmootherSpec sm{Method::Qfom, 1};
  BlockVector e = oracle::random_block_vector({63, 63}, 7);
  const BlockVector zero({63, 63});
  double prev = e.norm();
  for (int cycle = 0; cycle < 10; ++cycle) {
    e = vcycle(h, 0, zero, std::move(e), sm, opt);
    const double now = e.norm();
    CHECK(now < prev);
    prev = now;
  }
}

TEST_CASE("mg_solve with product-space smoothing converges fast and flat") {
  const GridHierarchy h = GridHierarchy::hain_lust_hierarchy(63);
  const BlockVector b = ones_rhs(h.op(0));
  MgOptions opt;
  opt.tol = 1e-12;
  const MgResult r = mg_solve(h, b, SmootherSpec{Method::Qfom, 1}, opt);
  REQUIRE(r.report.converged);
  CHECK(r.report.restarts <= 25);
  // Residuals trend down; tiny plateaus from the adaptive smoother are
  // tolerated but any two cycles must reduce the residual.
  for (std::size_t i = 1; i < r.report.relres.size(); ++i)
    CHECK(r.report.relres[i] < 1.05 * r.report.relres[i - 1]);
  for (std::size_t i = 2; i < r.report.relres.size(); ++i)
    CHECK(r.report.relres[i] < r.report.relres[i - 2]);
  // Recomputed residual honors the tolerance.
  BlockVector res = b;
  res -= h.op(0).apply(r.x);
  CHECK(res.norm() <= 1e-12 * b.norm() * (1.0 + 1e-10));
}

TEST_CASE("single-step gmres smoothing does not reach the deep tolerance") {
  const GridHierarchy h = GridHierarchy::hain_lust_hierarchy(1023);
  const BlockVector b = ones_rhs(h.op(0));
  MgOptions opt;
  opt.tol = 1e-12;
  const MgResult qf = mg_solve(h, b, SmootherSpec{Method::Qfom, 1}, opt);
  REQUIRE(qf.report.converged);

  MgOptions gopt = opt;
  gopt.max_cycles = 4 * qf.report.restarts;
  const MgResult gm = mg_solve(h, b, SmootherSpec{Method::Gmres, 1}, gopt);
  CHECK(!gm.report.converged);
  CHECK(gm.report.termination == Termination::MaxIter);
}

TEST_CASE("two product-space smoothing steps dominate one") {
  const GridHierarchy h = GridHierarchy::hain_lust_hierarchy(127);
  const BlockVector b = ones_rhs(h.op(0));
  MgOptions opt;
  opt.tol = 1e-12;
  const MgResult one = mg_solve(h, b, SmootherSpec{Method::Qfom, 1}, opt);
  const MgResult two = mg_solve(h, b, SmootherSpec{Method::Qfom, 2}, opt);
  REQUIRE(one.report.converged);
  REQUIRE(two.report.converged);
  CHECK(two.report.restarts <= one.report.restarts);
}

}  // TEST_SUITE
