#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "qk/blockops.hpp"
#include "qk/errors.hpp"
#include "qk/matrix_market.hpp"

using namespace qk;

namespace {

// Plain triple-loop multiply, independent of the library's kernels.
cvec naive_matvec(const dense::Matrix& a, const cvec& x) {
  cvec y(a.rows(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

}  // namespace

TEST_SUITE("blockops") {

TEST_CASE("identity operator returns its input") {
  const DenseBlockOperator a(dense::Matrix::identity(6), 3);
  const BlockVector x = oracle::random_block_vector({3, 3}, 5);
  const BlockVector y = a.apply(x);
  for (std::size_t i = 0; i < 6; ++i) CHECK(y[i] == x[i]);
}

TEST_CASE("block-diagonal scaling") {
  dense::Matrix m(4, 4);
  m(0, 0) = m(1, 1) = 2.0;
  m(2, 2) = m(3, 3) = 5.0;
  const DenseBlockOperator a(std::move(m), 2);
  BlockVector x({2, 2});
  x.part(0)[0] = 1.0;
  x.part(1)[0] = 1.0;
  const BlockVector y = a.apply(x);
  CHECK(y.part(0)[0] == cplx{2.0, 0.0});
  CHECK(y.part(0)[1] == cplx{0.0, 0.0});
  CHECK(y.part(1)[0] == cplx{5.0, 0.0});
  CHECK(y.part(1)[1] == cplx{0.0, 0.0});
}

TEST_CASE("blocked apply equals the unpartitioned matvec") {
  for (const std::size_t n : {2u, 6u, 17u, 64u}) {
    for (std::size_t n1 = 1; n1 < n; n1 += std::max<std::size_t>(1, n / 3)) {
      const dense::Matrix m = oracle::random_matrix(n, n, 900 + n + n1);
      const DenseBlockOperator a(m, n1);
      const BlockVector x = oracle::random_block_vector({n1, n - n1}, n1);
      const BlockVector y = a.apply(x);
      const cvec ref = naive_matvec(m, cvec(x.full().begin(), x.full().end()));
      double err = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        err += std::norm(y[i] - ref[i]);
        scale += std::norm(ref[i]);
      }
      CHECK(std::sqrt(err) <= 1e-13 * std::sqrt(scale));
    }
  }
}

TEST_CASE("block actions are linear on random probes") {
  const dense::Matrix m = oracle::random_matrix(9, 9, 77);
  const DenseBlockOperator op(m, 4);
  const BlockVector u = oracle::random_block_vector({4, 5}, 78);
  const BlockVector v = oracle::random_block_vector({4, 5}, 79);
  const cplx al{0.3, -1.1}, be{-0.7, 0.2};
  BlockVector lin = al * u + be * v;
  const BlockVector lhs = op.apply(lin);
  BlockVector rhs = al * op.apply(u) + be * op.apply(v);
  for (std::size_t i = 0; i < 9; ++i)
    CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-12);
}

TEST_CASE("split/join round trip is bit exact") {
  const BlockVector x = oracle::random_block_vector({5, 8}, 12);
  cvec joined(x.part(0).begin(), x.part(0).end());
  joined.insert(joined.end(), x.part(1).begin(), x.part(1).end());
  const BlockVector y(BlockStructure{5, 8}, joined);
  for (std::size_t i = 0; i < 13; ++i) CHECK(x[i] == y[i]);
  CHECK(x.norm_sq() ==
        doctest::Approx(norm_sq(x.part(0)) + norm_sq(x.part(1))));
}

TEST_CASE("dimension mismatch is rejected") {
  const DenseBlockOperator a(dense::Matrix::identity(6), 3);
  const BlockVector x = oracle::random_block_vector({2, 4}, 3);
  CHECK_THROWS_AS(a.apply(x), DimensionMismatch);
}

TEST_CASE("matrix market: 4x4 identity with n1=2 is the identity operator") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real general\n"
      "% identity\n"
      "4 4 4\n"
      "1 1 1.0\n2 2 1.0\n3 3 1.0\n4 4 1.0\n");
  const auto a = load_block_matrix(in, 2);
  const BlockVector x = oracle::random_block_vector({2, 2}, 9);
  const BlockVector y = a->apply(x);
  for (std::size_t i = 0; i < 4; ++i) CHECK(y[i] == x[i]);
}

TEST_CASE("matrix market: forced 1+1 partition of a 2x2 swap") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 2\n"
      "1 2 1.0\n2 1 1.0\n");
  const auto a = load_block_matrix(in, 1);
  cvec x{cplx{3.0, 0.0}};
  cvec y(1);
  a->apply_block(0, 0, cspan{x.data(), 1}, mspan{y.data(), 1});
  CHECK(y[0] == cplx{0.0, 0.0});
  a->apply_block(0, 1, cspan{x.data(), 1}, mspan{y.data(), 1});
  CHECK(y[0] == cplx{3.0, 0.0});
  a->apply_block(1, 0, cspan{x.data(), 1}, mspan{y.data(), 1});
  CHECK(y[0] == cplx{3.0, 0.0});
  a->apply_block(1, 1, cspan{x.data(), 1}, mspan{y.data(), 1});
  CHECK(y[0] == cplx{0.0, 0.0});
}

TEST_CASE("matrix market: loaded operator matches dense multiply") {
  std::ostringstream file;
  const dense::Matrix m = oracle::random_matrix(7, 7, 1234);
  save_matrix_coordinate(file, m);
  std::istringstream in(file.str());
  const auto a = load_block_matrix(in, 3);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const BlockVector x = oracle::random_block_vector({3, 4}, 4000 + s);
    const BlockVector y = a->apply(x);
    const cvec ref = naive_matvec(m, cvec(x.full().begin(), x.full().end()));
    for (std::size_t i = 0; i < 7; ++i)
      CHECK(std::abs(y[i] - ref[i]) <= 1e-12 * (std::abs(ref[i]) + 1.0));
  }
}

TEST_CASE("matrix market: array format and hermitian expansion") {
  std::istringstream arr(
      "%%MatrixMarket matrix array complex general\n"
      "2 2\n"
      "1.0 0.0\n0.0 1.0\n0.0 -1.0\n2.0 0.0\n");
  const dense::Matrix m = load_matrix(arr);
  CHECK(m(0, 0) == cplx{1.0, 0.0});
  CHECK(m(1, 0) == cplx{0.0, 1.0});
  CHECK(m(0, 1) == cplx{0.0, -1.0});
  CHECK(m(1, 1) == cplx{2.0, 0.0});

  std::istringstream herm(
      "%%MatrixMarket matrix coordinate complex hermitian\n"
      "2 2 2\n"
      "1 1 1.0 0.0\n"
      "2 1 0.5 0.25\n");
  const dense::Matrix h = load_matrix(herm);
  CHECK(h(1, 0) == cplx{0.5, 0.25});
  CHECK(h(0, 1) == cplx{0.5, -0.25});
}

TEST_CASE("matrix market: malformed inputs raise ParseError") {
  std::istringstream bad_banner("%%NotMatrixMarket matrix\n2 2 0\n");
  CHECK_THROWS_AS(load_matrix(bad_banner), ParseError);

  std::istringstream truncated(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 2\n"
      "1 1 1.0\n");
  CHECK_THROWS_AS(load_matrix(truncated), ParseError);

  std::istringstream out_of_range(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 1\n"
      "3 1 1.0\n");
  CHECK_THROWS_AS(load_matrix(out_of_range), ParseError);

  std::istringstream rect(
      "%%MatrixMarket matrix coordinate real general\n"
      "3 2 1\n"
      "1 1 1.0\n");
  CHECK_THROWS_AS(load_matrix(rect), NonSquare);

  std::istringstream ok(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 1\n"
      "1 1 1.0\n");
  CHECK_THROWS_AS(load_block_matrix(ok, 2), BadSplit);
}

TEST_CASE("assemble_dense reproduces the dense operator") {
  const dense::Matrix m = oracle::random_matrix(8, 8, 99);
  const DenseBlockOperator a(m, 5);
  const dense::Matrix back = assemble_dense(a);
  for (std::size_t j = 0; j < 8; ++j)
    for (std::size_t i = 0; i < 8; ++i)
      CHECK(std::abs(back(i, j) - m(i, j)) <= 1e-14);
}

}  // TEST_SUITE
