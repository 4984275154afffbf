#include "qk/ranges.hpp"

#include <algorithm>
#include <cmath>

#include "qk/errors.hpp"
#include "qk/rng.hpp"

namespace qk {

std::pair<cplx, cplx> eig2x2(cplx alpha, cplx beta, cplx gamma, cplx delta) {
  const cplx zero{0.0, 0.0};
  if (beta == zero || gamma == zero) return {alpha, delta};
  const cplx tr = alpha + delta;
  const cplx det = alpha * delta - beta * gamma;
  cplx disc = std::sqrt(tr * tr - 4.0 * det);
  // Pick the branch that adds constructively, then the companion root via
  // the product to avoid cancellation.
  if (std::real(std::conj(tr) * disc) < 0.0) disc = -disc;
  const cplx big = 0.5 * (tr + disc);
  if (big == zero) return {zero, zero};
  return {big, det / big};
}

namespace {

void fill_unit_gaussian(Rng& rng, mspan x) {
  for (cplx& v : x) v = rng.next_cnormal();
  const double nrm = norm(cspan{x.data(), x.size()});
  if (nrm == 0.0) {
    if (!x.empty()) x[0] = 1.0;
    return;
  }
  scale(cplx{1.0 / nrm, 0.0}, x);
}

}  // namespace

RangeSample sample_w(const BlockOperator& a, std::size_t samples,
                     std::uint64_t seed) {
  RangeSample out;
  out.sample_count = samples;
  out.seed = seed;
  out.points.reserve(samples);
  const std::size_t n = a.n();
  cvec x(n), ax(n);
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, s));
    fill_unit_gaussian(rng, mspan{x.data(), n});
    a.apply(cspan{x.data(), n}, mspan{ax.data(), n});
    out.points.push_back(dot(cspan{x.data(), n}, cspan{ax.data(), n}));
  }
  return out;
}

RangeSample sample_w2(const BlockOperator& a, std::size_t samples,
                      std::uint64_t seed) {
  RangeSample out;
  out.sample_count = samples;
  out.seed = seed;
  out.points.reserve(2 * samples);
  const BlockStructure& s = a.structure();
  cvec x1(s.n1), x2(s.n2), t1(s.n1), t2(s.n2);
  for (std::size_t k = 0; k < samples; ++k) {
    Rng rng(derive_seed(seed, k));
    fill_unit_gaussian(rng, mspan{x1.data(), s.n1});
    fill_unit_gaussian(rng, mspan{x2.data(), s.n2});
    a.apply_block(0, 0, cspan{x1.data(), s.n1}, mspan{t1.data(), s.n1});
    const cplx alpha = dot(cspan{x1.data(), s.n1}, cspan{t1.data(), s.n1});
    a.apply_block(0, 1, cspan{x2.data(), s.n2}, mspan{t1.data(), s.n1});
    const cplx beta = dot(cspan{x1.data(), s.n1}, cspan{t1.data(), s.n1});
    a.apply_block(1, 0, cspan{x1.data(), s.n1}, mspan{t2.data(), s.n2});
    const cplx gamma = dot(cspan{x2.data(), s.n2}, cspan{t2.data(), s.n2});
    a.apply_block(1, 1, cspan{x2.data(), s.n2}, mspan{t2.data(), s.n2});
    const cplx delta = dot(cspan{x2.data(), s.n2}, cspan{t2.data(), s.n2});
    const auto [l1, l2] = eig2x2(alpha, beta, gamma, delta);
    out.points.push_back(l1);
    out.points.push_back(l2);
  }
  return out;
}

GapEstimate gap_estimate(const RangeSample& s, double threshold_fraction) {
  if (s.points.empty()) throw EmptySample("gap_estimate on empty sample");
  GapEstimate g;
  g.delta = std::abs(s.points.front());
  for (const cplx& p : s.points) g.delta = std::min(g.delta, std::abs(p));

  std::vector<double> re(s.points.size());
  std::transform(s.points.begin(), s.points.end(), re.begin(),
                 [](const cplx& p) { return p.real(); });
  std::sort(re.begin(), re.end());
  const double span = re.back() - re.front();
  const double threshold = threshold_fraction * span;
  g.components_hint = 1;
  for (std::size_t i = 0; i + 1 < re.size(); ++i) {
    const double lo = re[i], hi = re[i + 1];
    if (lo < 0.0 && hi > 0.0 && hi - lo > threshold) {
      g.components_hint = 2;
      break;
    }
  }
  return g;
}

std::array<cplx, 4> enclosure_witness(const BlockOperator& a, cplx /*lambda*/,
                                      const BlockVector& v) {
  const BlockStructure& s = a.structure();
  if (v.structure() != s)
    throw DimensionMismatch("witness vector split mismatch");
  const double n1 = norm(v.part(0));
  const double n2 = norm(v.part(1));
  const double tot = std::sqrt(n1 * n1 + n2 * n2);
  // Tiny block components make the Rayleigh quotients meaningless; the
  // caller should fall back to sampling then.
  if (n1 <= 1e-8 * tot || n2 <= 1e-8 * tot)
    throw DegenerateBlock("eigenvector block norm is (numerically) zero");

  cvec x1(v.part(0).begin(), v.part(0).end());
  cvec x2(v.part(1).begin(), v.part(1).end());
  scale(cplx{1.0 / n1, 0.0}, mspan{x1.data(), x1.size()});
  scale(cplx{1.0 / n2, 0.0}, mspan{x2.data(), x2.size()});

  cvec t1(s.n1), t2(s.n2);
  std::array<cplx, 4> m;
  a.apply_block(0, 0, cspan{x1.data(), s.n1}, mspan{t1.data(), s.n1});
  m[0] = dot(cspan{x1.data(), s.n1}, cspan{t1.data(), s.n1});
  a.apply_block(0, 1, cspan{x2.data(), s.n2}, mspan{t1.data(), s.n1});
  m[1] = dot(cspan{x1.data(), s.n1}, cspan{t1.data(), s.n1});
  a.apply_block(1, 0, cspan{x1.data(), s.n1}, mspan{t2.data(), s.n2});
  m[2] = dot(cspan{x2.data(), s.n2}, cspan{t2.data(), s.n2});
  a.apply_block(1, 1, cspan{x2.data(), s.n2}, mspan{t2.data(), s.n2});
  m[3] = dot(cspan{x2.data(), s.n2}, cspan{t2.data(), s.n2});
  return m;
}

}  // namespace qk
