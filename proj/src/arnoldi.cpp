#include "qk/arnoldi.hpp"

#include <cmath>

#include "qk/errors.hpp"

namespace qk {

ArnoldiProcess::ArnoldiProcess(const BlockOperator& a, const BlockVector& r0,
                               ArnoldiOptions opt)
    : a_(a), opt_(opt) {
  if (r0.structure() != a.structure())
    throw DimensionMismatch("arnoldi: operator and residual splits disagree");
  beta_ = r0.norm();
  if (beta_ == 0.0) throw ZeroRightHandSide("arnoldi: r0 = 0");
  cvec v0(r0.full().begin(), r0.full().end());
  scale(cplx{1.0 / beta_, 0.0}, mspan{v0.data(), v0.size()});
  v_.push_back(std::move(v0));
}

ArnoldiStep ArnoldiProcess::step() {
  if (grade_reached_) return ArnoldiStep::HappyBreakdown;
  const std::size_t n = a_.n();
  const std::size_t k = v_.size();  // candidate will be column k
  cvec w(n);
  a_.apply(cspan{v_.back().data(), n}, mspan{w.data(), n});
  ++matvecs_;
  const double pre_norm = norm(cspan{w.data(), n});

  cvec h(k, cplx{0.0, 0.0});
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < k; ++j) {
      const cplx c = dot(cspan{v_[j].data(), n}, cspan{w.data(), n});
      axpy(-c, cspan{v_[j].data(), n}, mspan{w.data(), n});
      h[j] += c;
    }
  }
  const double eta = norm(cspan{w.data(), n});
  h.push_back(cplx{eta, 0.0});
  hcols_.push_back(std::move(h));
  if (eta <= opt_.breakdown_tol * pre_norm) {
    grade_reached_ = true;
    return ArnoldiStep::HappyBreakdown;
  }
  scale(cplx{1.0 / eta, 0.0}, mspan{w.data(), n});
  v_.push_back(std::move(w));
  return ArnoldiStep::Advanced;
}

dense::Matrix ArnoldiProcess::hessenberg_ext() const {
  const std::size_t k = hcols_.size();
  dense::Matrix h(k + 1, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < hcols_[j].size() && i <= k; ++i)
      h(i, j) = hcols_[j][i];
  return h;
}

dense::Matrix ArnoldiProcess::hessenberg() const {
  const std::size_t k = hcols_.size();
  dense::Matrix h(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < hcols_[j].size() && i < k; ++i)
      h(i, j) = hcols_[j][i];
  return h;
}

BlockVector ArnoldiProcess::lift(const BlockVector& x0, cspan coeffs) const {
  BlockVector x = x0;
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    axpy(coeffs[j], cspan{v_[j].data(), v_[j].size()}, x.full());
  return x;
}

ArnoldiProcess::Iterate ArnoldiProcess::fom(const BlockVector& x0,
                                            std::size_t use_order) const {
  const std::size_t k = use_order == 0 ? order() : use_order;
  if (k == 0 || k > order()) throw Error("fom: bad order");
  Iterate out{x0, 0.0, false, 0.0};
  dense::Matrix h(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < hcols_[j].size() && i < k; ++i)
      h(i, j) = hcols_[j][i];
  const double h_norm1 = h.norm_one();
  const dense::Lu f = dense::lu_factor(std::move(h));
  out.cond = dense::lu_cond1(f, h_norm1);
  if (!(out.cond < opt_.singular_cond)) {
    out.singular = true;
    return out;
  }
  cvec rhs(k, cplx{0.0, 0.0});
  rhs[0] = beta_;
  const cvec xi = dense::lu_solve(f, std::move(rhs));
  const double eta_k = hcols_[k - 1][k].real();
  out.reduced_resid = eta_k * std::abs(xi[k - 1]);
  out.x = lift(x0, cspan{xi.data(), k});
  return out;
}

ArnoldiProcess::Iterate ArnoldiProcess::gmres(const BlockVector& x0) const {
  const std::size_t k = order();
  if (k == 0) throw Error("gmres: no iterations performed");
  cvec rhs(k + 1, cplx{0.0, 0.0});
  rhs[0] = beta_;
  double resid = 0.0;
  const cvec xi = dense::qr_solve_ls(hessenberg_ext(), std::move(rhs), &resid);
  Iterate out{lift(x0, cspan{xi.data(), k}), resid, false, 0.0};
  return out;
}

std::optional<dense::Matrix> ArnoldiProcess::gmres_rank1_model() const {
  const std::size_t k = order();
  if (k == 0) return std::nullopt;
  dense::Matrix h = hessenberg();
  const double h_norm1 = h.norm_one();
  const dense::Lu f = dense::lu_factor(h);
  if (!(dense::lu_cond1(f, h_norm1) < opt_.singular_cond)) return std::nullopt;
  const double eta = hcols_[k - 1][k].real();
  cvec ek(k, cplx{0.0, 0.0});
  ek[k - 1] = 1.0;
  const cvec z = dense::lu_solve_adjoint(f, std::move(ek));
  // H + |h_{k+1,k}|^2 (H^{-*} e_k) e_k^*: only the last column changes.
  for (std::size_t i = 0; i < k; ++i) h(i, k - 1) += eta * eta * z[i];
  return h;
}

}  // namespace qk
