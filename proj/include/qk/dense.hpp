#pragma once

#include <cstddef>
#include <vector>

#include "qk/vec.hpp"

namespace qk::dense {

/// Column-major complex matrix for the reduced models (dimensions are a few
/// hundred at most; all routines here are plain scalar code).
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i + rows_ * j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return a_[i + rows_ * j];
  }

  cspan col(std::size_t j) const { return {a_.data() + rows_ * j, rows_}; }
  mspan col(std::size_t j) { return {a_.data() + rows_ * j, rows_}; }

  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  Matrix adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < rows_; ++i) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  /// Leading submatrix copy.
  Matrix top_left(std::size_t r, std::size_t c) const {
    Matrix m(r, c);
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t i = 0; i < r; ++i) m(i, j) = (*this)(i, j);
    return m;
  }

  double norm_fro() const {
    double s = 0.0;
    for (const cplx& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  double norm_one() const {
    double m = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
      m = std::max(m, s);
    }
    return m;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  cvec a_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
cvec multiply(const Matrix& a, cspan x);
/// a^* x
cvec multiply_adjoint(const Matrix& a, cspan x);

/// LU factorization with partial pivoting, P A = L U.
struct Lu {
  Matrix lu;
  std::vector<std::size_t> piv;
  bool singular = false;  // an exact zero pivot occurred
};

Lu lu_factor(Matrix a);
cvec lu_solve(const Lu& f, cvec b);
/// Solves A^* x = b using the factorization of A.
cvec lu_solve_adjoint(const Lu& f, cvec b);
/// 1-norm condition estimate; returns +inf when a pivot was exactly zero.
double lu_cond1(const Lu& f, double a_norm1);

/// Householder QR least squares: minimizes ||b - A x|| for full-column-rank
/// A with rows >= cols. Optionally reports the residual norm of the reduced
/// problem.
cvec qr_solve_ls(Matrix a, cvec b, double* resid_norm = nullptr);

/// Column-pivoted QR with complete orthogonal fallback. Returns the
/// minimum-norm least squares solution when the numerical rank (relative
/// threshold rcond on the pivoted R diagonal) is below the column count.
struct LsResult {
  cvec x;
  std::size_t rank = 0;
  bool rank_deficient = false;
  double resid_norm = 0.0;
};

LsResult cod_solve_ls(Matrix a, cvec b, double rcond = 1e-12);

/// Eigenvalues of a real symmetric tridiagonal matrix (implicit-shift QL).
/// diag has n entries, off has n-1.
std::vector<double> symtrid_eigenvalues(std::vector<double> diag,
                                        std::vector<double> off);

}  // namespace qk::dense
