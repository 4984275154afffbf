#include "qk/two_level.hpp"

#include <cmath>

#include "qk/errors.hpp"

namespace qk {

TwoLevelProcess::TwoLevelProcess(const BlockOperator& a, const BlockVector& r0,
                                 TwoLevelOptions opt)
    : a_(a), opt_(opt), r0_(r0), rng_(opt.seed) {
  if (r0.structure() != a.structure())
    throw DimensionMismatch("two-level: operator and residual splits disagree");
  b_norm_[0] = norm(r0.part(0));
  b_norm_[1] = norm(r0.part(1));
  beta_ = std::sqrt(b_norm_[0] * b_norm_[0] + b_norm_[1] * b_norm_[1]);
  if (beta_ == 0.0) throw ZeroRightHandSide("two-level: r0 = 0");
  for (int i = 0; i < 2; ++i) {
    const std::size_t ni = a.structure().size(i);
    if (b_norm_[i] > 0.0) {
      cvec v(r0.part(i).begin(), r0.part(i).end());
      scale(cplx{1.0 / b_norm_[i], 0.0}, mspan{v.data(), ni});
      v_[i].push_back(std::move(v));
      rcols_[i].push_back({cplx{b_norm_[i] / beta_, 0.0}});
    } else {
      // Zero block in the right-hand side: coupling starts at zero and the
      // basis starts from a seeded random unit direction.
      cvec v(ni);
      for (cplx& e : v) e = rng_.next_cnormal();
      const double nv = norm(cspan{v.data(), ni});
      scale(cplx{1.0 / nv, 0.0}, mspan{v.data(), ni});
      v_[i].push_back(std::move(v));
      rcols_[i].push_back({cplx{0.0, 0.0}});
      any_replacement_ = true;
      event_log_.push_back("init: block " + std::to_string(i + 1) +
                           " of r0 is zero, using a random unit start");
    }
  }
}

cvec TwoLevelProcess::r_times(int i, cspan y, std::size_t cols) const {
  const std::size_t out_len = rcols_[i][cols - 1].size();
  cvec out(out_len, cplx{0.0, 0.0});
  for (std::size_t t = 0; t < cols; ++t) {
    const cvec& col = rcols_[i][t];
    axpy(y[t], cspan{col.data(), col.size()}, mspan{out.data(), col.size()});
  }
  return out;
}

cvec TwoLevelProcess::r_adjoint_times(int i, cspan y, std::size_t cols) const {
  cvec out(cols);
  for (std::size_t t = 0; t < cols; ++t) {
    const cvec& col = rcols_[i][t];
    out[t] = dot(cspan{col.data(), col.size()}, y.subspan(0, col.size()));
  }
  return out;
}

cvec TwoLevelProcess::random_orthonormal(int i) {
  const std::size_t ni = a_.structure().size(i);
  for (int attempt = 0; attempt < 32; ++attempt) {
    cvec v(ni);
    for (cplx& e : v) e = rng_.next_cnormal();
    const double pre = norm(cspan{v.data(), ni});
    if (pre == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const cvec& q : v_[i]) {
        const cplx c = dot(cspan{q.data(), ni}, cspan{v.data(), ni});
        axpy(-c, cspan{q.data(), ni}, mspan{v.data(), ni});
      }
    const double post = norm(cspan{v.data(), ni});
    if (post > 1e-8 * pre) {
      scale(cplx{1.0 / post, 0.0}, mspan{v.data(), ni});
      return v;
    }
  }
  throw Error("two-level: failed to draw a replacement direction");
}

TwoLevelStep TwoLevelProcess::step() {
  if (finished_) return last_status_;
  const BlockStructure& s = a_.structure();
  const std::size_t k = k_ + 1;

  // New cached products for blocks whose basis grew to k columns.
  bool applied = false;
  for (int j = 0; j < 2; ++j) {
    if (w_[0][j].size() >= v_[j].size()) continue;
    const cvec& vj = v_[j].back();
    for (int i = 0; i < 2; ++i) {
      const std::size_t ni = s.size(i);
      cvec w(ni);
      a_.apply_block(i, j, cspan{vj.data(), vj.size()}, mspan{w.data(), ni});
      cvec zcol(v_[i].size());
      for (std::size_t r = 0; r < v_[i].size(); ++r)
        zcol[r] = dot(cspan{v_[i][r].data(), ni}, cspan{w.data(), ni});
      w_[i][j].push_back(std::move(w));
      z_[i][j].push_back(std::move(zcol));
    }
    applied = true;
  }
  if (applied) ++matvecs_;

  // Block candidates: last column of A_i1 V_1 R_1 + A_i2 V_2 R_2,
  // orthogonalized against the block basis (CGS2).
  cvec h_blk[2], resid[2];
  double eta_raw[2], pre_norm[2];
  for (int i = 0; i < 2; ++i) {
    const std::size_t ni = s.size(i);
    cvec cand(ni, cplx{0.0, 0.0});
    for (int j = 0; j < 2; ++j) {
      const cvec& rk = rcols_[j][k - 1];
      for (std::size_t t = 0; t < rk.size(); ++t)
        axpy(rk[t], cspan{w_[i][j][t].data(), ni}, mspan{cand.data(), ni});
    }
    pre_norm[i] = norm(cspan{cand.data(), ni});
    cvec h(v_[i].size(), cplx{0.0, 0.0});
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t t = 0; t < v_[i].size(); ++t) {
        const cplx c =
            dot(cspan{v_[i][t].data(), ni}, cspan{cand.data(), ni});
        axpy(-c, cspan{v_[i][t].data(), ni}, mspan{cand.data(), ni});
        h[t] += c;
      }
    eta_raw[i] = norm(cspan{cand.data(), ni});
    h_blk[i] = std::move(h);
    resid[i] = std::move(cand);
  }

  StepEvents ev;
  double eta_blk[2];
  bool degenerate[2];
  for (int i = 0; i < 2; ++i) {
    ev.frozen[i] = v_[i].size() == s.size(i);
    degenerate[i] = eta_raw[i] <= opt_.breakdown_tol * pre_norm[i];
    eta_blk[i] = (ev.frozen[i] || degenerate[i]) ? 0.0 : eta_raw[i];
  }

  // Global Hessenberg column via the triangular couplings.
  cvec h_glob = r_adjoint_times(0, cspan{h_blk[0].data(), h_blk[0].size()}, k);
  {
    const cvec h2 =
        r_adjoint_times(1, cspan{h_blk[1].data(), h_blk[1].size()}, k);
    for (std::size_t t = 0; t < k; ++t) h_glob[t] += h2[t];
  }
  cvec rtilde[2];
  double eta_glob_sq = 0.0;
  double scale_sq = 0.0;
  for (int i = 0; i < 2; ++i) {
    rtilde[i] = r_times(i, cspan{h_glob.data(), k}, k);
    for (std::size_t t = 0; t < rtilde[i].size(); ++t)
      rtilde[i][t] = h_blk[i][t] - rtilde[i][t];
    eta_glob_sq += norm_sq(cspan{rtilde[i].data(), rtilde[i].size()}) +
                   eta_blk[i] * eta_blk[i];
    scale_sq += norm_sq(cspan{h_blk[i].data(), h_blk[i].size()}) +
                eta_raw[i] * eta_raw[i];
  }
  const double eta_glob = std::sqrt(eta_glob_sq);
  const double scl = std::sqrt(scale_sq);

  cvec hu_col = h_glob;
  hu_col.push_back(cplx{eta_glob, 0.0});
  hucols_.push_back(std::move(hu_col));
  k_ = k;

  if (eta_glob <= opt_.breakdown_tol * scl || scl == 0.0) {
    for (int i = 0; i < 2; ++i) hicols_[i].push_back(std::move(h_blk[i]));
    events_.push_back(ev);
    event_log_.push_back("step " + std::to_string(k) +
                         ": global subdiagonal vanished (grade reached)");
    finished_ = true;
    last_status_ = TwoLevelStep::GradeReached;
    return last_status_;
  }
  if (ev.frozen[0] && ev.frozen[1]) {
    for (int i = 0; i < 2; ++i) hicols_[i].push_back(std::move(h_blk[i]));
    events_.push_back(ev);
    event_log_.push_back("step " + std::to_string(k) +
                         ": both block bases complete");
    finished_ = true;
    last_status_ = TwoLevelStep::SpaceComplete;
    return last_status_;
  }

  if (degenerate[0] && degenerate[1] && !ev.frozen[0] && !ev.frozen[1]) {
    ev.serious = true;
    event_log_.push_back("step " + std::to_string(k) +
                         ": both block candidates degenerate while the "
                         "global subdiagonal is not (handled by random "
                         "replacement)");
  }

  for (int i = 0; i < 2; ++i) {
    cvec rcol = rtilde[i];
    scale(cplx{1.0 / eta_glob, 0.0}, mspan{rcol.data(), rcol.size()});
    if (ev.frozen[i]) {
      // Basis complete; R_i continues with columns only, no new row.
      rcols_[i].push_back(std::move(rcol));
      hicols_[i].push_back(std::move(h_blk[i]));
      continue;
    }
    cvec vnew;
    if (degenerate[i]) {
      vnew = random_orthonormal(i);
      ev.replaced[i] = true;
      any_replacement_ = true;
      event_log_.push_back("step " + std::to_string(k) + ": block " +
                           std::to_string(i + 1) +
                           " candidate degenerate, random replacement");
    } else {
      vnew = std::move(resid[i]);
      scale(cplx{1.0 / eta_raw[i], 0.0}, mspan{vnew.data(), vnew.size()});
    }
    rcol.push_back(cplx{eta_blk[i] / eta_glob, 0.0});
    rcols_[i].push_back(std::move(rcol));
    h_blk[i].push_back(cplx{eta_blk[i], 0.0});
    hicols_[i].push_back(std::move(h_blk[i]));
    for (int j = 0; j < 2; ++j)
      for (std::size_t t = 0; t < z_[i][j].size(); ++t) {
        const cvec& w = w_[i][j][t];
        z_[i][j][t].push_back(
            dot(cspan{vnew.data(), vnew.size()}, cspan{w.data(), w.size()}));
      }
    v_[i].push_back(std::move(vnew));
  }
  events_.push_back(ev);
  if (opt_.track_invariants) record_invariants();
  return TwoLevelStep::Advanced;
}

void TwoLevelProcess::record_invariants() {
  const std::size_t cols = rcols_[0].size();
  const dense::Matrix r1 = r_factor(0, cols);
  const dense::Matrix r2 = r_factor(1, cols);
  dense::Matrix sum = dense::multiply(r1.adjoint(), r1);
  const dense::Matrix s2 = dense::multiply(r2.adjoint(), r2);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < cols; ++i) sum(i, j) += s2(i, j);
    sum(j, j) -= 1.0;
  }
  max_sum_r_ = std::max(max_sum_r_, sum.norm_fro());

  const dense::Matrix hu = hu_ext();
  for (int i = 0; i < 2; ++i) {
    const dense::Matrix prod = dense::multiply(r_factor(i, cols), hu);
    dense::Matrix hi = hi_ext(i);
    double diff = 0.0;
    for (std::size_t jj = 0; jj < hi.cols(); ++jj)
      for (std::size_t ii = 0; ii < hi.rows(); ++ii)
        diff += std::norm(hi(ii, jj) - prod(ii, jj));
    max_hk_ = std::max(max_hk_, std::sqrt(diff));
  }
}

std::size_t TwoLevelProcess::model_dim(int i, std::size_t ord) const {
  if (ord == 0) ord = k_;
  return std::min(ord, a_.structure().size(i));
}

dense::Matrix TwoLevelProcess::r_factor(int i, std::size_t cols) const {
  const std::size_t rows = rcols_[i][cols - 1].size();
  dense::Matrix r(rows, cols);
  for (std::size_t t = 0; t < cols; ++t)
    for (std::size_t row = 0; row < rcols_[i][t].size(); ++row)
      r(row, t) = rcols_[i][t][row];
  return r;
}

dense::Matrix TwoLevelProcess::hu_ext() const {
  dense::Matrix h(k_ + 1, k_);
  for (std::size_t j = 0; j < k_; ++j)
    for (std::size_t i = 0; i < hucols_[j].size() && i <= k_; ++i)
      h(i, j) = hucols_[j][i];
  return h;
}

dense::Matrix TwoLevelProcess::hi_ext(int i) const {
  dense::Matrix h(v_[i].size(), k_);
  for (std::size_t j = 0; j < k_; ++j)
    for (std::size_t r = 0; r < hicols_[i][j].size() && r < h.rows(); ++r)
      h(r, j) = hicols_[i][j][r];
  return h;
}

QuadModel TwoLevelProcess::quad_model(std::size_t ord) const {
  if (ord == 0) ord = k_;
  if (ord == 0 || ord > k_) throw Error("quad_model: bad order");
  QuadModel m;
  for (int i = 0; i < 2; ++i) {
    m.d[i] = model_dim(i, ord);
    m.d_ext[i] = ord < k_ ? std::min(ord + 1, a_.structure().size(i))
                          : v_[i].size();
  }
  const std::size_t dx = m.d[0] + m.d[1];
  const std::size_t dxe = m.d_ext[0] + m.d_ext[1];
  m.hx = dense::Matrix(dx, dx);
  m.hxu = dense::Matrix(dxe, dx);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const std::size_t r0 = i == 0 ? 0 : m.d[0];
      const std::size_t r0e = i == 0 ? 0 : m.d_ext[0];
      const std::size_t c0 = j == 0 ? 0 : m.d[0];
      for (std::size_t t = 0; t < m.d[j]; ++t) {
        const cvec& zc = z_[i][j][t];
        for (std::size_t r = 0; r < m.d[i]; ++r) m.hx(r0 + r, c0 + t) = zc[r];
        for (std::size_t r = 0; r < m.d_ext[i] && r < zc.size(); ++r)
          m.hxu(r0e + r, c0 + t) = zc[r];
      }
    }
  m.bx.assign(dx, cplx{0.0, 0.0});
  m.bx[0] = b_norm_[0];
  m.bx[m.d[0]] = b_norm_[1];
  m.bx_ext.assign(dxe, cplx{0.0, 0.0});
  m.bx_ext[0] = b_norm_[0];
  m.bx_ext[m.d_ext[0]] = b_norm_[1];
  return m;
}

TwoLevelProcess::Iterate TwoLevelProcess::lift(const BlockVector& x0,
                                               cspan zeta1,
                                               cspan zeta2) const {
  Iterate out{x0, r0_, 0.0, false, false, 0.0};
  const cspan zeta[2] = {zeta1, zeta2};
  for (int i = 0; i < 2; ++i) {
    mspan xi = out.x.part(i);
    for (std::size_t t = 0; t < zeta[i].size(); ++t)
      axpy(zeta[i][t], cspan{v_[i][t].data(), v_[i][t].size()}, xi);
    mspan ri = out.r.part(i);
    for (int j = 0; j < 2; ++j)
      for (std::size_t t = 0; t < zeta[j].size(); ++t)
        axpy(-zeta[j][t], cspan{w_[i][j][t].data(), w_[i][j][t].size()}, ri);
  }
  out.rnorm = out.r.norm();
  return out;
}

TwoLevelProcess::Iterate TwoLevelProcess::qfom(const BlockVector& x0,
                                               std::size_t ord) const {
  const QuadModel m = quad_model(ord);
  const double norm1 = m.hx.norm_one();
  const dense::Lu f = dense::lu_factor(m.hx);
  const double cond = dense::lu_cond1(f, norm1);
  if (!(cond < opt_.singular_cond)) {
    Iterate out{x0, r0_, beta_, true, false, cond};
    return out;
  }
  const cvec zeta = dense::lu_solve(f, m.bx);
  Iterate out = lift(x0, cspan{zeta.data(), m.d[0]},
                     cspan{zeta.data() + m.d[0], m.d[1]});
  out.cond = cond;
  return out;
}

TwoLevelProcess::Iterate TwoLevelProcess::qqgmres(const BlockVector& x0,
                                                  std::size_t ord) const {
  const QuadModel m = quad_model(ord);
  const dense::LsResult ls =
      dense::cod_solve_ls(m.hxu, m.bx_ext, opt_.rankdef_rcond);
  Iterate out = lift(x0, cspan{ls.x.data(), m.d[0]},
                     cspan{ls.x.data() + m.d[0], m.d[1]});
  out.rank_deficient = ls.rank_deficient;
  return out;
}

TwoLevelProcess::Iterate TwoLevelProcess::gmres_embedded(
    const BlockVector& x0, std::size_t ord) const {
  if (ord == 0) ord = k_;
  if (ord == 0 || ord > k_) throw Error("gmres_embedded: bad order");
  dense::Matrix hu(ord + 1, ord);
  for (std::size_t j = 0; j < ord; ++j)
    for (std::size_t i = 0; i < hucols_[j].size() && i <= ord; ++i)
      hu(i, j) = hucols_[j][i];
  cvec rhs(ord + 1, cplx{0.0, 0.0});
  rhs[0] = beta_;
  const cvec xi = dense::qr_solve_ls(std::move(hu), std::move(rhs));
  const cvec u1 = r_times(0, cspan{xi.data(), ord}, ord);
  const cvec u2 = r_times(1, cspan{xi.data(), ord}, ord);
  return lift(x0, cspan{u1.data(), u1.size()}, cspan{u2.data(), u2.size()});
}

TwoLevelProcess::Iterate TwoLevelProcess::qgmres_reference(
    const BlockVector& x0, std::size_t ord) const {
  const QuadModel m = quad_model(ord);
  const BlockStructure& s = a_.structure();
  const std::size_t dx = m.d[0] + m.d[1];
  dense::Matrix av(s.n(), dx);
  for (int j = 0; j < 2; ++j) {
    const std::size_t c0 = j == 0 ? 0 : m.d[0];
    for (std::size_t t = 0; t < m.d[j]; ++t) {
      mspan col = av.col(c0 + t);
      for (std::size_t r = 0; r < s.n1; ++r) col[r] = w_[0][j][t][r];
      for (std::size_t r = 0; r < s.n2; ++r) col[s.n1 + r] = w_[1][j][t][r];
    }
  }
  cvec rhs(r0_.full().begin(), r0_.full().end());
  const cvec eta = dense::qr_solve_ls(std::move(av), std::move(rhs));
  return lift(x0, cspan{eta.data(), m.d[0]},
              cspan{eta.data() + m.d[0], m.d[1]});
}

Interpolation interpolate_optimal(const BlockVector& x_g,
                                  const BlockVector& x_q,
                                  const BlockVector& r_g,
                                  const BlockVector& r_q,
                                  double degenerate_tol) {
  Interpolation out;
  BlockVector diff = r_g;
  diff -= r_q;
  const double dn2 = diff.norm_sq();
  const double gn2 = r_g.norm_sq();
  const double qn2 = r_q.norm_sq();
  const double scale = std::max(gn2, qn2);
  if (dn2 <= degenerate_tol * degenerate_tol * scale) {
    out.alpha = 1.0;
    out.x = x_g;
    out.rnorm = std::sqrt(gn2);
    out.degenerate = true;
    return out;
  }
  const double cross = std::real(dot(r_g, r_q));
  out.alpha = (qn2 - cross) / dn2;
  out.x = x_q;
  BlockVector dx = x_g;
  dx -= x_q;
  axpy(cplx{out.alpha, 0.0}, dx.full(), out.x.full());
  const double num = gn2 * qn2 - cross * cross;
  out.rnorm = num > 0.0 ? std::sqrt(num / dn2) : 0.0;
  return out;
}

}  // namespace qk
