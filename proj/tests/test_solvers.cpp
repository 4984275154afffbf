#include <cmath>

#include <thread>

#include "doctest.h"
#include "oracles.hpp"
#include "qk/errors.hpp"
#include "qk/experiments.hpp"
#include "qk/problems.hpp"
#include "qk/solvers.hpp"

using namespace qk;

TEST_SUITE("solvers") {

TEST_CASE("identity system converges in one cycle for every method") {
  const DenseBlockOperator a(dense::Matrix::identity(8), 4);
  const BlockVector b = oracle::random_block_vector({4, 4}, 1);
  const BlockVector x0({4, 4});
  SolveOptions opt;
  opt.restart = 5;
  opt.tol = 1e-12;
  for (const Method m : {Method::Fom, Method::Gmres, Method::Qfom,
                         Method::Qqgmres, Method::Interp}) {
    const SolveResult r = solve(a, b, x0, m, opt);
    CHECK(r.report.converged);
    CHECK(r.report.termination == Termination::Tolerance);
    CHECK(r.report.restarts == 1);
    CHECK(r.report.relres.front() == 1.0);
    CHECK(r.report.relres.back() <= 1e-12);
    for (std::size_t i = 0; i < 8; ++i)
      CHECK(std::abs(r.x[i] - b[i]) <= 1e-12);
  }
}

TEST_CASE("converged solves satisfy the tolerance when recomputed") {
  dense::Matrix m = oracle::random_matrix(24, 24, 3);
  for (std::size_t i = 0; i < 24; ++i) m(i, i) += 8.0;
  const DenseBlockOperator a(m, 10);
  const BlockVector b = ones_rhs(a);
  const BlockVector x0({10, 14});
  SolveOptions opt;
  opt.restart = 8;
  opt.tol = 1e-10;
  opt.max_restarts = 50;
  for (const Method method : {Method::Fom, Method::Gmres, Method::Qfom,
                              Method::Qqgmres, Method::Interp}) {
    const SolveResult r = solve(a, b, x0, method, opt);
    REQUIRE(r.report.converged);
    BlockVector res = b;
    res -= a.apply(r.x);
    CHECK(res.norm() <= opt.tol * b.norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("gmres cycle-end residuals never increase") {
  const auto a = hain_lust(255);
  const BlockVector b = ones_rhs(*a);
  const BlockVector x0(a->structure());
  SolveOptions opt;
  opt.restart = 50;
  opt.tol = 1e-14;  // unreachable; observe the trajectory
  opt.max_restarts = 6;
  const SolveResult r = restarted_solve(*a, b, x0, Method::Gmres, opt);
  for (std::size_t i = 1; i < r.report.relres.size(); ++i)
    CHECK(r.report.relres[i] <= r.report.relres[i - 1] + 1e-12);
}

TEST_CASE("fom with restart length 1 terminates on a singular model") {
  // v1^* A v1 = 0 for A = [[0,1],[1,0]] and b = e1.
  dense::Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  const DenseBlockOperator a(std::move(m), 1);
  BlockVector b({1, 1});
  b[0] = 1.0;
  SolveOptions opt;
  opt.restart = 1;
  opt.tol = 1e-12;
  const SolveResult r =
      restarted_solve(a, b, BlockVector({1, 1}), Method::Fom, opt);
  CHECK(!r.report.converged);
  CHECK(r.report.termination == Termination::SingularModel);
  CHECK(!r.report.events.empty());
}

TEST_CASE("fom with room for the grade solves the swap system") {
  dense::Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  const DenseBlockOperator a(std::move(m), 1);
  BlockVector b({1, 1});
  b[0] = 1.0;
  SolveOptions opt;
  opt.restart = 2;
  opt.tol = 1e-12;
  const SolveResult r =
      restarted_solve(a, b, BlockVector({1, 1}), Method::Fom, opt);
  CHECK(r.report.converged);
  CHECK(std::abs(r.x[1] - cplx{1.0, 0.0}) <= 1e-12);
}

TEST_CASE("per-iteration recording produces one entry per step") {
  dense::Matrix m = oracle::random_matrix(12, 12, 7);
  for (std::size_t i = 0; i < 12; ++i) m(i, i) += 5.0;
  const DenseBlockOperator a(m, 6);
  const BlockVector b = oracle::random_block_vector({6, 6}, 8);
  SolveOptions opt;
  opt.restart = 4;
  opt.tol = 1e-30;  // force the full budget
  opt.max_restarts = 3;
  opt.record = RecordMode::Iteration;
  for (const Method method : {Method::Gmres, Method::Qfom, Method::Interp}) {
    const SolveResult r = solve(a, b, BlockVector({6, 6}), method, opt);
    // 1 initial entry + restart * max_restarts iteration entries.
    CHECK(r.report.relres.size() == 1 + 4 * 3);
    CHECK(r.report.record == RecordMode::Iteration);
  }
}

TEST_CASE("interpolated cycle end never loses to the shared-state gmres") {
  const auto a = hain_lust(127);
  const BlockVector b = ones_rhs(*a);
  BlockVector x(a->structure());
  BlockVector r = b;
  const double r0 = r.norm();
  for (std::size_t cycle = 1; cycle <= 5; ++cycle) {
    TwoLevelOptions tl;
    tl.seed = derive_seed(55, cycle);
    TwoLevelProcess proc(*a, r, tl);
    for (std::size_t it = 0; it < 30; ++it)
      if (proc.step() != TwoLevelStep::Advanced) break;
    const auto gm = proc.gmres_embedded(x);
    const auto qq = proc.qqgmres(x);
    const auto ip = interpolate_optimal(gm.x, qq.x, gm.r, qq.r);
    CHECK(ip.rnorm <= gm.rnorm + 1e-12 * r0);
    CHECK(ip.rnorm <= qq.rnorm + 1e-12 * r0);
    x = ip.x;
    r = b;
    r -= a->apply(x);
  }
}

TEST_CASE("reports are deterministic for a fixed configuration") {
  const auto a = hain_lust(63);
  const BlockVector b = ones_rhs(*a);
  const BlockVector x0(a->structure());
  SolveOptions opt;
  opt.restart = 10;
  opt.tol = 1e-8;
  opt.max_restarts = 10;
  for (const Method m :
       {Method::Fom, Method::Qfom, Method::Qqgmres, Method::Interp}) {
    const SolveResult r1 = solve(*a, b, x0, m, opt);
    const SolveResult r2 = solve(*a, b, x0, m, opt);
    REQUIRE(r1.report.relres.size() == r2.report.relres.size());
    for (std::size_t i = 0; i < r1.report.relres.size(); ++i)
      CHECK(r1.report.relres[i] == r2.report.relres[i]);
  }
}

TEST_CASE("matvec accounting covers the restart overhead") {
  const auto a = hain_lust(63);
  const BlockVector b = ones_rhs(*a);
  SolveOptions opt;
  opt.restart = 10;
  opt.tol = 1e-30;
  opt.max_restarts = 2;
  const SolveResult r =
      restarted_solve(*a, b, BlockVector(a->structure()), Method::Gmres, opt);
  // initial residual + 2 cycles x (10 steps + 1 recompute)
  CHECK(r.report.matvecs == 1 + 2 * (10 + 1));
}

TEST_CASE("product-space method handles unit blocks and a zero rhs block") {
  // Swap system with the 1+1 split: b2 = 0, both block bases are complete
  // after one step, and the product space already contains the solution.
  dense::Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  const DenseBlockOperator a(std::move(m), 1);
  BlockVector b({1, 1});
  b[0] = 1.0;
  SolveOptions opt;
  opt.restart = 1;
  opt.tol = 1e-12;
  const SolveResult r =
      restarted_quad_solve(a, b, BlockVector({1, 1}), Method::Qfom, opt);
  CHECK(r.report.converged);
  CHECK(r.report.restarts == 1);
  CHECK(std::abs(r.x[1] - cplx{1.0, 0.0}) <= 1e-12);
  CHECK(std::abs(r.x[0]) <= 1e-12);
}

TEST_CASE("concurrent independent solves match serial results") {
  const auto a = hain_lust(63);
  const BlockVector b = ones_rhs(*a);
  const BlockVector x0(a->structure());
  SolveOptions opt;
  opt.restart = 10;
  opt.tol = 1e-8;
  opt.max_restarts = 20;
  const SolveResult serial_q = solve(*a, b, x0, Method::Qfom, opt);
  const SolveResult serial_g = solve(*a, b, x0, Method::Gmres, opt);

  SolveResult thr_q{x0, {}}, thr_g{x0, {}};
  std::thread t1([&] { thr_q = solve(*a, b, x0, Method::Qfom, opt); });
  std::thread t2([&] { thr_g = solve(*a, b, x0, Method::Gmres, opt); });
  t1.join();
  t2.join();
  REQUIRE(thr_q.report.relres.size() == serial_q.report.relres.size());
  REQUIRE(thr_g.report.relres.size() == serial_g.report.relres.size());
  for (std::size_t i = 0; i < thr_q.report.relres.size(); ++i)
    CHECK(thr_q.report.relres[i] == serial_q.report.relres[i]);
  for (std::size_t i = 0; i < thr_g.report.relres.size(); ++i)
    CHECK(thr_g.report.relres[i] == serial_g.report.relres[i]);
}

TEST_CASE("method names round trip") {
  for (const Method m : {Method::Fom, Method::Gmres, Method::Qfom,
                         Method::Qqgmres, Method::Interp})
    CHECK(method_from_name(method_name(m)) == m);
  CHECK_THROWS_AS(method_from_name("newton"), ConfigError);
}

}  // TEST_SUITE
