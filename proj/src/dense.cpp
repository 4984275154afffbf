#include "qk/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qk/errors.hpp"

namespace qk::dense {

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shapes");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx bkj = b(k, j);
      if (bkj == cplx{0.0, 0.0}) continue;
      for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) += a(i, k) * bkj;
    }
  return c;
}

cvec multiply(const Matrix& a, cspan x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matvec shapes");
  cvec y(a.rows(), cplx{0.0, 0.0});
  for (std::size_t j = 0; j < a.cols(); ++j)
    axpy(x[j], a.col(j), mspan{y.data(), y.size()});
  return y;
}

cvec multiply_adjoint(const Matrix& a, cspan x) {
  if (a.rows() != x.size()) throw DimensionMismatch("adjoint matvec shapes");
  cvec y(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) y[j] = dot(a.col(j), x);
  return y;
}

Lu lu_factor(Matrix a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("LU needs a square matrix");
  const std::size_t n = a.rows();
  Lu f;
  f.piv.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    f.piv[k] = p;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
    if (a(k, k) == cplx{0.0, 0.0}) {
      f.singular = true;
      continue;
    }
    const cplx inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) a(i, k) *= inv;
    for (std::size_t j = k + 1; j < n; ++j) {
      const cplx akj = a(k, j);
      if (akj == cplx{0.0, 0.0}) continue;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= a(i, k) * akj;
    }
  }
  f.lu = std::move(a);
  return f;
}

cvec lu_solve(const Lu& f, cvec b) {
  const std::size_t n = f.lu.rows();
  if (b.size() != n) throw DimensionMismatch("LU solve rhs size");
  for (std::size_t k = 0; k < n; ++k)
    if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
  // L y = P b (unit lower)
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = k + 1; i < n; ++i) b[i] -= f.lu(i, k) * b[k];
  // U x = y
  for (std::size_t k = n; k-- > 0;) {
    b[k] /= f.lu(k, k);
    for (std::size_t i = 0; i < k; ++i) b[i] -= f.lu(i, k) * b[k];
  }
  return b;
}

cvec lu_solve_adjoint(const Lu& f, cvec b) {
  // P A = L U  =>  A^* = U^* L^* P. Solve U^* y = b, L^* z = y, x = P^{-1} z.
  const std::size_t n = f.lu.rows();
  if (b.size() != n) throw DimensionMismatch("LU adjoint solve rhs size");
  // U^* y = b: lower triangular with conjugated entries.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < k; ++i) b[k] -= std::conj(f.lu(i, k)) * b[i];
    b[k] /= std::conj(f.lu(k, k));
  }
  // L^* z = y: unit upper triangular with conjugated entries.
  for (std::size_t k = n; k-- > 0;)
    for (std::size_t i = k + 1; i < n; ++i)
      b[k] -= std::conj(f.lu(i, k)) * b[i];
  // Undo the row swaps in reverse order.
  for (std::size_t k = n; k-- > 0;)
    if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
  return b;
}

double lu_cond1(const Lu& f, double a_norm1) {
  if (f.singular) return std::numeric_limits<double>::infinity();
  const std::size_t n = f.lu.rows();
  if (n == 0) return 1.0;
  // ||A^{-1}||_1 exactly via n solves; the factors are small.
  double inv_norm = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cvec e(n, cplx{0.0, 0.0});
    e[j] = 1.0;
    const cvec x = lu_solve(f, std::move(e));
    double s = 0.0;
    for (const cplx& v : x) s += std::abs(v);
    if (!std::isfinite(s)) return std::numeric_limits<double>::infinity();
    inv_norm = std::max(inv_norm, s);
  }
  return a_norm1 * inv_norm;
}

namespace {

// Elementary reflector H = I - tau v v^*, tau = 2 / ||v||^2 (real), so H is
// Hermitian and unitary. make_reflector maps x to (alpha, 0, ..., 0).
struct Reflector {
  cvec v;
  double tau = 0.0;
};

Reflector make_reflector(cspan x) {
  Reflector h;
  h.v.assign(x.begin(), x.end());
  const double xnorm = norm(x);
  if (xnorm == 0.0) {
    h.tau = 0.0;
    if (!h.v.empty()) h.v[0] = 1.0;
    return h;
  }
  const cplx x0 = x[0];
  const double ax0 = std::abs(x0);
  const cplx sign = ax0 > 0.0 ? x0 / ax0 : cplx{1.0, 0.0};
  const cplx alpha = -sign * xnorm;
  h.v[0] = x0 - alpha;
  const double vnorm_sq = norm_sq(cspan{h.v.data(), h.v.size()});
  if (vnorm_sq == 0.0) {
    h.tau = 0.0;
    h.v[0] = 1.0;
    return h;
  }
  h.tau = 2.0 / vnorm_sq;
  return h;
}

void apply_reflector(const Reflector& h, mspan y) {
  if (h.tau == 0.0) return;
  const cplx c = h.tau * dot(cspan{h.v.data(), h.v.size()}, y);
  axpy(-c, cspan{h.v.data(), h.v.size()}, y);
}

// Gathers rows {head} + [tail_begin, tail_end) of column j into a scratch
// vector, applies the reflector, scatters back.
void apply_reflector_rows(const Reflector& h, Matrix& a, std::size_t j,
                          std::size_t head, std::size_t tail_begin,
                          std::size_t tail_end, cvec& scratch) {
  const std::size_t extra = tail_end - tail_begin;
  scratch.resize(1 + extra);
  scratch[0] = a(head, j);
  for (std::size_t i = 0; i < extra; ++i) scratch[1 + i] = a(tail_begin + i, j);
  apply_reflector(h, mspan{scratch.data(), scratch.size()});
  a(head, j) = scratch[0];
  for (std::size_t i = 0; i < extra; ++i) a(tail_begin + i, j) = scratch[1 + i];
}

}  // namespace

cvec qr_solve_ls(Matrix a, cvec b, double* resid_norm) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw DimensionMismatch("LS rhs size");
  if (m < n) throw DimensionMismatch("LS needs rows >= cols");
  cvec scratch;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t len = m - k;
    scratch.assign(a.col(k).begin() + k, a.col(k).end());
    const Reflector h = make_reflector(cspan{scratch.data(), len});
    for (std::size_t j = k; j < n; ++j)
      apply_reflector(h, a.col(j).subspan(k));
    apply_reflector(h, mspan{b.data() + k, len});
  }
  if (resid_norm) {
    double s = 0.0;
    for (std::size_t i = n; i < m; ++i) s += std::norm(b[i]);
    *resid_norm = std::sqrt(s);
  }
  cvec x(n);
  for (std::size_t k = n; k-- > 0;) {
    cplx s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

LsResult cod_solve_ls(Matrix a, cvec b, double rcond) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw DimensionMismatch("LS rhs size");
  LsResult out;

  // Column-pivoted QR: A P = Q R.
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < n; ++j) perm[j] = j;

  const std::size_t kmax = std::min(m, n);
  std::vector<double> rdiag;
  cvec scratch;
  for (std::size_t k = 0; k < kmax; ++k) {
    std::size_t p = k;
    double best = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += std::norm(a(i, j));
      if (s > best) {
        best = s;
        p = j;
      }
    }
    if (p != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(a(i, k), a(i, p));
      std::swap(perm[k], perm[p]);
    }
    const std::size_t len = m - k;
    scratch.assign(a.col(k).begin() + k, a.col(k).end());
    const Reflector h = make_reflector(cspan{scratch.data(), len});
    for (std::size_t j = k; j < n; ++j)
      apply_reflector(h, a.col(j).subspan(k));
    apply_reflector(h, mspan{b.data() + k, len});
    rdiag.push_back(std::abs(a(k, k)));
  }

  std::size_t rank = 0;
  const double tol = rdiag.empty() ? 0.0 : rcond * rdiag[0];
  for (double d : rdiag) {
    if (d > tol)
      ++rank;
    else
      break;
  }
  out.rank = rank;
  out.rank_deficient = rank < n;
  {
    double s = 0.0;
    for (std::size_t i = rank; i < m; ++i) s += std::norm(b[i]);
    out.resid_norm = std::sqrt(s);
  }

  cvec y(n, cplx{0.0, 0.0});
  if (!out.rank_deficient) {
    for (std::size_t k = rank; k-- > 0;) {
      cplx s = b[k];
      for (std::size_t j = k + 1; j < rank; ++j) s -= a(k, j) * y[j];
      y[k] = s / a(k, k);
    }
  } else if (rank > 0) {
    // Complete orthogonal step on M = R(0:rank, 0:n): annihilate the
    // trailing block with reflectors from the right, M = [T 0] Zh with T
    // upper triangular. Implemented on rt = M^* (n x rank) with left
    // reflectors acting on rows {k} + [rank, n). Rows of M are processed
    // bottom-up so previously created zeros are preserved.
    Matrix rt(n, rank);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < n; ++j) rt(j, i) = std::conj(a(i, j));
    std::vector<Reflector> zs(rank);
    for (std::size_t k = rank; k-- > 0;) {
      const std::size_t extra = n - rank;
      scratch.resize(1 + extra);
      scratch[0] = rt(k, k);
      for (std::size_t i = 0; i < extra; ++i) scratch[1 + i] = rt(rank + i, k);
      zs[k] = make_reflector(cspan{scratch.data(), scratch.size()});
      cvec tmp;
      for (std::size_t j = 0; j <= k; ++j)
        apply_reflector_rows(zs[k], rt, j, k, rank, n, tmp);
    }
    // T(k, j) = conj(rt(j, k)) for j >= k. Solve T w = b(0:rank).
    cvec w(rank);
    for (std::size_t k = rank; k-- > 0;) {
      cplx s = b[k];
      for (std::size_t j = k + 1; j < rank; ++j)
        s -= std::conj(rt(j, k)) * w[j];
      w[k] = s / std::conj(rt(k, k));
    }
    // Minimum-norm y = Zh^* [w; 0]: apply reflectors in ascending order.
    cvec u(n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < rank; ++i) u[i] = w[i];
    Matrix uw(n, 1);
    for (std::size_t i = 0; i < n; ++i) uw(i, 0) = u[i];
    cvec tmp;
    for (std::size_t k = 0; k < rank; ++k)
      apply_reflector_rows(zs[k], uw, 0, k, rank, n, tmp);
    for (std::size_t i = 0; i < n; ++i) y[i] = uw(i, 0);
  }

  out.x.assign(n, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) out.x[perm[j]] = y[j];
  return out;
}

std::vector<double> symtrid_eigenvalues(std::vector<double> d,
                                        std::vector<double> e) {
  const std::size_t n = d.size();
  if (n == 0) return {};
  if (e.size() + 1 != n) throw DimensionMismatch("tridiagonal sizes");
  e.push_back(0.0);
  for (std::size_t l = 0; l < n; ++l) {
    std::size_t iter = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
          break;
      }
      if (m == l) break;
      if (++iter > 60) break;  // accept current value; convergence stalled
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double bb = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * bb;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - bb;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace qk::dense
