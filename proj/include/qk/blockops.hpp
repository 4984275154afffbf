#pragma once

#include <memory>

#include "qk/dense.hpp"
#include "qk/vec.hpp"

namespace qk {

/// Linear operator on C^n with a declared split n = n1 + n2 and four block
/// actions. Implementations are immutable after construction; apply_block is
/// reentrant, so operators can be shared freely across threads.
class BlockOperator {
public:
  virtual ~BlockOperator() = default;

  const BlockStructure& structure() const { return s_; }
  std::size_t n() const { return s_.n(); }

  /// y = A_{ij} x (overwritten). x has length n_j, y has length n_i;
  /// i, j are 0-based block indices.
  virtual void apply_block(int i, int j, cspan x, mspan y) const = 0;

  /// y = A x on the full space, y_i = A_{i1} x_1 + A_{i2} x_2.
  BlockVector apply(const BlockVector& x) const;

  /// Same as apply() but on raw spans carrying the operator's split.
  void apply(cspan x, mspan y) const;

protected:
  explicit BlockOperator(BlockStructure s) : s_(s) {}

private:
  BlockStructure s_;
};

/// Dense operator holding the full matrix; blocks are contiguous partitions.
class DenseBlockOperator : public BlockOperator {
public:
  DenseBlockOperator(dense::Matrix a, std::size_t n1);

  void apply_block(int i, int j, cspan x, mspan y) const override;

  const dense::Matrix& matrix() const { return a_; }

private:
  dense::Matrix a_;
};

/// Assembles the dense matrix of any block operator by probing with unit
/// vectors (test- and export-scale sizes only).
dense::Matrix assemble_dense(const BlockOperator& a);

}  // namespace qk
