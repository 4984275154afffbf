#pragma once

// Eigen-backed reference computations for the test suites. Everything here
// is an independent route: the library under test never touches Eigen.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <vector>

#include "qk/blockops.hpp"
#include "qk/dense.hpp"
#include "qk/rng.hpp"
#include "qk/vec.hpp"

namespace oracle {

using qk::cplx;
using qk::cvec;
using EMat = Eigen::MatrixXcd;
using EVec = Eigen::VectorXcd;

inline EMat to_eigen(const qk::dense::Matrix& m) {
  EMat e(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) e(i, j) = m(i, j);
  return e;
}

inline qk::dense::Matrix from_eigen(const EMat& e) {
  qk::dense::Matrix m(e.rows(), e.cols());
  for (Eigen::Index j = 0; j < e.cols(); ++j)
    for (Eigen::Index i = 0; i < e.rows(); ++i) m(i, j) = e(i, j);
  return m;
}

inline EVec to_eigen_vec(qk::cspan x) {
  EVec v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v(i) = x[i];
  return v;
}

inline cvec from_eigen_vec(const EVec& v) {
  cvec x(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) x[i] = v(i);
  return x;
}

inline qk::dense::Matrix random_matrix(std::size_t rows, std::size_t cols,
                                       std::uint64_t seed) {
  qk::dense::Matrix m(rows, cols);
  qk::Rng rng(seed);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = rng.next_cnormal();
  return m;
}

inline qk::BlockVector random_block_vector(qk::BlockStructure s,
                                           std::uint64_t seed) {
  qk::BlockVector v(s);
  qk::Rng rng(seed);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.next_cnormal();
  return v;
}

inline std::vector<cplx> eigenvalues(const qk::dense::Matrix& m) {
  Eigen::ComplexEigenSolver<EMat> es(to_eigen(m), false);
  std::vector<cplx> out(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    out[i] = es.eigenvalues()(i);
  return out;
}

inline cvec dense_solve(const qk::dense::Matrix& a, qk::cspan b) {
  const EVec x = to_eigen(a).partialPivLu().solve(to_eigen_vec(b));
  return from_eigen_vec(x);
}

inline qk::dense::Matrix dense_inverse(const qk::dense::Matrix& a) {
  return from_eigen(to_eigen(a).inverse());
}

// Convex hull (Andrew monotone chain) of complex points seen as R^2, and a
// signed-distance membership test with tolerance.
inline std::vector<cplx> convex_hull(std::vector<cplx> pts) {
  std::sort(pts.begin(), pts.end(), [](const cplx& a, const cplx& b) {
    return a.real() < b.real() ||
           (a.real() == b.real() && a.imag() < b.imag());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const cplx& o, const cplx& a, const cplx& b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
  };
  std::vector<cplx> hull(2 * pts.size());
  std::size_t k = 0;
  for (const cplx& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

inline bool in_hull(const std::vector<cplx>& hull, const cplx& p, double tol) {
  if (hull.size() < 3) {
    for (const cplx& h : hull)
      if (std::abs(h - p) <= tol) return true;
    if (hull.size() == 2) {
      // Distance to the segment.
      const cplx d = hull[1] - hull[0];
      const double len2 = std::norm(d);
      double t = len2 > 0.0
                     ? std::real(std::conj(d) * (p - hull[0])) / len2
                     : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      return std::abs(hull[0] + t * d - p) <= tol;
    }
    return false;
  }
  // Hull is counterclockwise; inside iff every edge cross product >= -tol
  // (scaled by the edge length to make tol a distance).
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const cplx a = hull[i];
    const cplx b = hull[(i + 1) % hull.size()];
    const double cr = (b.real() - a.real()) * (p.imag() - a.imag()) -
                      (b.imag() - a.imag()) * (p.real() - a.real());
    const double len = std::abs(b - a);
    if (len > 0.0 && cr < -tol * len) return false;
  }
  return true;
}

}  // namespace oracle
