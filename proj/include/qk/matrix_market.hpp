#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "qk/blockops.hpp"

namespace qk {

/// Reads a square matrix in Matrix Market coordinate or array format
/// (real, integer or complex; general, symmetric, skew-symmetric or
/// hermitian) and partitions it contiguously at row/column n1.
/// The split is caller-provided; it is not stored in the file.
std::unique_ptr<DenseBlockOperator> load_block_matrix(const std::string& path,
                                                      std::size_t n1);

/// Same, from an already-open stream (used by tests).
std::unique_ptr<DenseBlockOperator> load_block_matrix(std::istream& in,
                                                      std::size_t n1);

/// Reads a square matrix without a split requirement.
dense::Matrix load_matrix(std::istream& in);

/// Writes a matrix in complex coordinate format, skipping exact zeros.
void save_matrix_coordinate(std::ostream& out, const dense::Matrix& m);

}  // namespace qk
