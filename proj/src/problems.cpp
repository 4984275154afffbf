#include "qk/problems.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qk/errors.hpp"
#include "qk/rng.hpp"

namespace qk {

HainLustOperator::HainLustOperator(std::size_t n_points)
    : BlockOperator({n_points, n_points}),
      h_(1.0 / static_cast<double>(n_points + 1)) {
  if (n_points < 1) throw BadDimensions("hain_lust: N >= 1 required");
  q_.resize(n_points);
  for (std::size_t j = 0; j < n_points; ++j) {
    const double phase =
        2.0 * std::numbers::pi * h_ * static_cast<double>(j + 1);
    q_[j] = cplx{-3.0, 0.0} + 2.0 * std::polar(1.0, phase);
  }
}

void HainLustOperator::apply_block(int i, int j, cspan x, mspan y) const {
  const std::size_t n = structure().n1;
  if (x.size() != n || y.size() != n)
    throw DimensionMismatch("hain_lust: span sizes");
  if (i != j) {
    // Identity coupling.
    std::copy(x.begin(), x.end(), y.begin());
    return;
  }
  if (i == 0) {
    const double s = 1.0 / (h_ * h_);
    for (std::size_t r = 0; r < n; ++r) {
      cplx v = 2.0 * x[r];
      if (r > 0) v -= x[r - 1];
      if (r + 1 < n) v -= x[r + 1];
      y[r] = s * v;
    }
  } else {
    for (std::size_t r = 0; r < n; ++r) y[r] = q_[r] * x[r];
  }
}

std::unique_ptr<HainLustOperator> hain_lust(std::size_t n_points) {
  return std::make_unique<HainLustOperator>(n_points);
}

double alpha_min(double h) {
  if (h <= 0.0 || h >= 1.0) throw BadDimensions("alpha_min: 0 < h < 1");
  return (2.0 - 2.0 * std::cos(std::numbers::pi * h)) / (h * h);
}

std::pair<double, double> strip_for_alpha_min(double a_min) {
  if (a_min <= 2.0)
    throw NoStrip("no zero-free strip certificate for alpha_min <= 2");
  const double a = -0.25;
  const double b = std::min(1.0, a_min - 2.0) / 2.0;
  if (!((a + 1.0) * (a_min - b) > 1.0))
    throw NoStrip("strip certificate inequality failed");
  return {a, b};
}

std::pair<double, double> hain_lust_strip(std::size_t n_points) {
  return strip_for_alpha_min(alpha_min(1.0 / static_cast<double>(n_points + 1)));
}

GaugeField gauge_random(std::size_t extent, std::uint64_t seed,
                        double mixing) {
  if (extent < 2) throw BadDimensions("gauge field extent must be >= 2");
  GaugeField g;
  g.extent = extent;
  g.seed = seed;
  g.source = GaugeField::Source::Random;
  g.ux.resize(extent * extent);
  g.uy.resize(extent * extent);
  Rng rng(derive_seed(seed, 0x6761756765ULL));
  for (cplx& u : g.ux) u = rng.next_phase(mixing);
  for (cplx& u : g.uy) u = rng.next_phase(mixing);
  return g;
}

void save_gauge(std::ostream& out, const GaugeField& g) {
  out << g.extent << '\n';
  char buf[96];
  for (std::size_t y = 0; y < g.extent; ++y)
    for (std::size_t x = 0; x < g.extent; ++x)
      for (int dir = 0; dir < 2; ++dir) {
        const cplx u = g.link(dir, x, y);
        std::snprintf(buf, sizeof(buf), "%zu %zu %d %.16e %.16e\n", x, y, dir,
                      u.real(), u.imag());
        out << buf;
      }
}

GaugeField load_gauge(std::istream& in) {
  GaugeField g;
  g.source = GaugeField::Source::File;
  if (!(in >> g.extent) || g.extent < 2)
    throw ParseError("gauge file: bad lattice extent");
  const std::size_t n2 = g.extent * g.extent;
  g.ux.assign(n2, cplx{0.0, 0.0});
  g.uy.assign(n2, cplx{0.0, 0.0});
  std::vector<bool> seen(2 * n2, false);
  std::size_t x = 0, y = 0;
  int dir = 0;
  double re = 0.0, im = 0.0;
  for (std::size_t entry = 0; entry < 2 * n2; ++entry) {
    if (!(in >> x >> y >> dir >> re >> im))
      throw ParseError("gauge file: truncated link list");
    if (x >= g.extent || y >= g.extent || dir < 0 || dir > 1)
      throw ParseError("gauge file: link index out of range");
    const cplx u{re, im};
    if (std::abs(std::abs(u) - 1.0) > 1e-12)
      throw ParseError("gauge file: link is not unimodular");
    const std::size_t idx = x + g.extent * y;
    if (seen[dir * n2 + idx]) throw ParseError("gauge file: duplicate link");
    seen[dir * n2 + idx] = true;
    (dir == 0 ? g.ux : g.uy)[idx] = u;
  }
  return g;
}

GaugeField load_gauge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open gauge file: " + path);
  return load_gauge(in);
}

SchwingerOperator::SchwingerOperator(double m0, GaugeField gauge)
    : BlockOperator({gauge.extent * gauge.extent, gauge.extent * gauge.extent}),
      m0_(m0),
      gauge_(std::move(gauge)) {
  if (gauge_.extent < 2) throw BadDimensions("schwinger: lattice extent >= 2");
}

void SchwingerOperator::apply_a(cspan x, mspan y, double mass) const {
  const std::size_t n = gauge_.extent;
  for (std::size_t iy = 0; iy < n; ++iy) {
    const std::size_t yup = iy + 1 == n ? 0 : iy + 1;
    const std::size_t ydn = iy == 0 ? n - 1 : iy - 1;
    for (std::size_t ix = 0; ix < n; ++ix) {
      const std::size_t xup = ix + 1 == n ? 0 : ix + 1;
      const std::size_t xdn = ix == 0 ? n - 1 : ix - 1;
      const std::size_t s = ix + n * iy;
      cplx v = (mass + 2.0) * x[s];
      v -= 0.5 * gauge_.link(0, ix, iy) * x[xup + n * iy];
      v -= 0.5 * gauge_.link(1, ix, iy) * x[ix + n * yup];
      v -= 0.5 * std::conj(gauge_.link(0, xdn, iy)) * x[xdn + n * iy];
      v -= 0.5 * std::conj(gauge_.link(1, ix, ydn)) * x[ix + n * ydn];
      y[s] = v;
    }
  }
}

void SchwingerOperator::apply_b(cspan x, mspan y, bool negate) const {
  const std::size_t n = gauge_.extent;
  const cplx iu{0.0, 1.0};
  for (std::size_t iy = 0; iy < n; ++iy) {
    const std::size_t yup = iy + 1 == n ? 0 : iy + 1;
    const std::size_t ydn = iy == 0 ? n - 1 : iy - 1;
    for (std::size_t ix = 0; ix < n; ++ix) {
      const std::size_t xup = ix + 1 == n ? 0 : ix + 1;
      const std::size_t xdn = ix == 0 ? n - 1 : ix - 1;
      const std::size_t s = ix + n * iy;
      cplx v = -0.5 * (gauge_.link(0, ix, iy) * x[xup + n * iy] +
                       iu * gauge_.link(1, ix, iy) * x[ix + n * yup]);
      v += 0.5 * (std::conj(gauge_.link(0, xdn, iy)) * x[xdn + n * iy] -
                  iu * std::conj(gauge_.link(1, ix, ydn)) * x[ix + n * ydn]);
      y[s] = negate ? -v : v;
    }
  }
}

void SchwingerOperator::apply_block(int i, int j, cspan x, mspan y) const {
  const std::size_t m = structure().n1;
  if (x.size() != m || y.size() != m)
    throw DimensionMismatch("schwinger: span sizes");
  if (i == 0 && j == 0) {
    apply_a(x, y, m0_);
  } else if (i == 0 && j == 1) {
    apply_b(x, y, false);
  } else if (i == 1 && j == 0) {
    // B^* = -B.
    apply_b(x, y, true);
  } else {
    apply_a(x, y, m0_);
    scale(cplx{-1.0, 0.0}, y);
  }
}

void SchwingerOperator::apply_gauge_laplace(cspan x, mspan y) const {
  apply_a(x, y, 0.0);
}

std::unique_ptr<SchwingerOperator> schwinger(std::size_t extent, double m0,
                                             GaugeField gauge) {
  if (gauge.extent != extent)
    throw DimensionMismatch("schwinger: gauge extent mismatch");
  return std::make_unique<SchwingerOperator>(m0, std::move(gauge));
}

double schwinger_gap(double a0_min, double m0) { return m0 + a0_min; }

ExtremeW2Operator::ExtremeW2Operator(std::size_t n1, std::size_t n2,
                                     cplx lambda1, cplx lambda2,
                                     dense::Matrix off, OffBlock which)
    : BlockOperator({n1, n2}),
      l1_(lambda1),
      l2_(lambda2),
      off_(std::move(off)),
      which_(which) {
  if (n1 < 2 || n2 < 2)
    throw BadDimensions("extreme_w2: block sizes must be >= 2");
  const std::size_t er = which == OffBlock::UpperRight ? n1 : n2;
  const std::size_t ec = which == OffBlock::UpperRight ? n2 : n1;
  if (off_.rows() != er || off_.cols() != ec)
    throw BadDimensions("extreme_w2: off-block shape mismatch");
}

void ExtremeW2Operator::apply_block(int i, int j, cspan x, mspan y) const {
  if (x.size() != structure().size(j) || y.size() != structure().size(i))
    throw DimensionMismatch("extreme_w2: span sizes");
  if (i == j) {
    const cplx l = i == 0 ? l1_ : l2_;
    for (std::size_t r = 0; r < y.size(); ++r) y[r] = l * x[r];
    return;
  }
  const bool active = (which_ == OffBlock::UpperRight && i == 0 && j == 1) ||
                      (which_ == OffBlock::LowerLeft && i == 1 && j == 0);
  if (!active) {
    std::fill(y.begin(), y.end(), cplx{0.0, 0.0});
    return;
  }
  std::fill(y.begin(), y.end(), cplx{0.0, 0.0});
  for (std::size_t c = 0; c < off_.cols(); ++c) axpy(x[c], off_.col(c), y);
}

std::unique_ptr<ExtremeW2Operator> extreme_w2(std::size_t n1, std::size_t n2,
                                              cplx lambda1, cplx lambda2,
                                              dense::Matrix off,
                                              OffBlock which) {
  return std::make_unique<ExtremeW2Operator>(n1, n2, lambda1, lambda2,
                                             std::move(off), which);
}

std::unique_ptr<ExtremeW2Operator> extreme_w2_random(std::size_t n1,
                                                     std::size_t n2,
                                                     cplx lambda1, cplx lambda2,
                                                     std::uint64_t seed,
                                                     OffBlock which) {
  const std::size_t er = which == OffBlock::UpperRight ? n1 : n2;
  const std::size_t ec = which == OffBlock::UpperRight ? n2 : n1;
  dense::Matrix off(er, ec);
  Rng rng(derive_seed(seed, 0x65787472ULL));
  for (std::size_t j = 0; j < ec; ++j)
    for (std::size_t i = 0; i < er; ++i) off(i, j) = rng.next_cnormal();
  return extreme_w2(n1, n2, lambda1, lambda2, std::move(off), which);
}

std::pair<double, double> hermitian_extremes(
    std::size_t dim, const std::function<void(cspan, mspan)>& apply,
    std::size_t max_steps, std::uint64_t seed) {
  if (dim == 0) throw BadDimensions("hermitian_extremes: empty operator");
  const std::size_t steps = std::min(max_steps, dim);
  std::vector<cvec> basis;
  basis.reserve(steps);
  {
    Rng rng(derive_seed(seed, 0x6c616e63ULL));
    cvec v(dim);
    for (cplx& e : v) e = rng.next_cnormal();
    const double nv = norm(cspan{v.data(), dim});
    scale(cplx{1.0 / nv, 0.0}, mspan{v.data(), dim});
    basis.push_back(std::move(v));
  }
  std::vector<double> diag, off;
  cvec w(dim);
  for (std::size_t k = 0; k < steps; ++k) {
    apply(cspan{basis[k].data(), dim}, mspan{w.data(), dim});
    // Full reorthogonalization keeps the tridiagonal honest.
    cvec h(basis.size(), cplx{0.0, 0.0});
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t t = 0; t < basis.size(); ++t) {
        const cplx c = dot(cspan{basis[t].data(), dim}, cspan{w.data(), dim});
        axpy(-c, cspan{basis[t].data(), dim}, mspan{w.data(), dim});
        h[t] += c;
      }
    diag.push_back(h[k].real());
    const double eta = norm(cspan{w.data(), dim});
    if (k + 1 == steps || eta <= 1e-13 * std::abs(diag.back())) break;
    off.push_back(eta);
    cvec v = w;
    scale(cplx{1.0 / eta, 0.0}, mspan{v.data(), dim});
    basis.push_back(std::move(v));
  }
  off.resize(diag.size() - 1);
  const std::vector<double> eig = dense::symtrid_eigenvalues(diag, off);
  return {eig.front(), eig.back()};
}

double measure_a0_min(const GaugeField& gauge) {
  const std::size_t dim = gauge.extent * gauge.extent;
  SchwingerOperator op(0.0, gauge);
  const auto apply = [&op](cspan x, mspan y) { op.apply_gauge_laplace(x, y); };
  // Fixed start seed: identical links give identical measurements whether
  // the configuration was seeded or loaded from a file.
  return hermitian_extremes(dim, apply, dim, 0xa0a0a0ULL).first;
}

}  // namespace qk
