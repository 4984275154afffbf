#include "qk/blockops.hpp"

#include "qk/errors.hpp"

namespace qk {

BlockVector BlockOperator::apply(const BlockVector& x) const {
  if (x.structure() != s_)
    throw DimensionMismatch("operator and vector splits disagree");
  BlockVector y(s_);
  apply(x.full(), y.full());
  return y;
}

void BlockOperator::apply(cspan x, mspan y) const {
  if (x.size() != s_.n() || y.size() != s_.n())
    throw DimensionMismatch("apply: vector length does not match operator");
  const cspan x1 = x.subspan(0, s_.n1);
  const cspan x2 = x.subspan(s_.n1, s_.n2);
  cvec tmp(std::max(s_.n1, s_.n2));
  for (int i = 0; i < 2; ++i) {
    const std::size_t ni = s_.size(i);
    mspan yi = i == 0 ? y.subspan(0, s_.n1) : y.subspan(s_.n1, s_.n2);
    apply_block(i, 0, x1, yi);
    mspan t{tmp.data(), ni};
    apply_block(i, 1, x2, t);
    axpy(cplx{1.0, 0.0}, cspan{tmp.data(), ni}, yi);
  }
}

DenseBlockOperator::DenseBlockOperator(dense::Matrix a, std::size_t n1)
    : BlockOperator({n1, a.rows() >= n1 ? a.rows() - n1 : 0}),
      a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw NonSquare("dense operator must be square");
  if (n1 < 1 || n1 >= a_.rows())
    throw BadSplit("split must satisfy 1 <= n1 < n");
}

void DenseBlockOperator::apply_block(int i, int j, cspan x, mspan y) const {
  const std::size_t n1 = structure().n1;
  const std::size_t rows = structure().size(i);
  const std::size_t cols = structure().size(j);
  if (x.size() != cols || y.size() != rows)
    throw DimensionMismatch("apply_block: span sizes");
  const std::size_t r0 = i == 0 ? 0 : n1;
  const std::size_t c0 = j == 0 ? 0 : n1;
  std::fill(y.begin(), y.end(), cplx{0.0, 0.0});
  for (std::size_t c = 0; c < cols; ++c)
    axpy(x[c], a_.col(c0 + c).subspan(r0, rows), y);
}

dense::Matrix assemble_dense(const BlockOperator& a) {
  const std::size_t n = a.n();
  dense::Matrix m(n, n);
  cvec e(n, cplx{0.0, 0.0});
  cvec col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    a.apply(cspan{e.data(), n}, mspan{col.data(), n});
    for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
    e[j] = 0.0;
  }
  return m;
}

}  // namespace qk
