#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qk/blockops.hpp"
#include "qk/dense.hpp"
#include "qk/vec.hpp"

namespace qk {

/// Coupled 1-D operator [[L/h^2, I], [I, Q]] on N interior grid points of
/// [0,1] with Dirichlet boundary: L = tridiag(-1, 2, -1) and
/// Q = -3 I + 2 diag(e^{2 pi i h j}), j = 1..N, h = 1/(N+1).
/// Blocks are applied stencil-wise; nothing is materialized.
class HainLustOperator : public BlockOperator {
public:
  explicit HainLustOperator(std::size_t n_points);

  void apply_block(int i, int j, cspan x, mspan y) const override;

  std::size_t grid_points() const { return structure().n1; }
  double h() const { return h_; }
  cplx q_diag(std::size_t j) const { return q_[j]; }

private:
  double h_;
  cvec q_;
};

std::unique_ptr<HainLustOperator> hain_lust(std::size_t n_points);

/// Smallest point of the numerical range of the discrete 1-D Laplacian
/// block: (2 - 2 cos(pi h)) / h^2. Tends to pi^2 as h -> 0.
double alpha_min(double h);

/// A strip a < Re(z) < b around the origin that the quadratic numerical
/// range of the coupled operator cannot intersect: any point in it would
/// need (a+1)(alpha_min(h) - b) <= 1. Defaults a = -1/4,
/// b = min(1, alpha_min - 2)/2. Throws NoStrip when alpha_min(h) <= 2.
std::pair<double, double> hain_lust_strip(std::size_t n_points);

/// Same construction from a given alpha_min value.
std::pair<double, double> strip_for_alpha_min(double a_min);

/// U(1) lattice gauge configuration: unimodular link variables in both
/// directions on an N x N periodic lattice.
struct GaugeField {
  enum class Source { Random, File };

  std::size_t extent = 0;
  cvec ux, uy;  // row-major, site (x, y) at index x + extent*y
  std::uint64_t seed = 0;
  Source source = Source::Random;

  const cplx& link(int dir, std::size_t x, std::size_t y) const {
    return (dir == 0 ? ux : uy)[x + extent * y];
  }
};

/// Independent uniform phases, deterministic in the seed. mixing in [0, 1]
/// scales the phase spread: 0 gives the unit (cold) configuration.
GaugeField gauge_random(std::size_t extent, std::uint64_t seed,
                        double mixing = 1.0);

/// Plain text format: first line N, then one line "x y dir re im" per link.
void save_gauge(std::ostream& out, const GaugeField& g);
GaugeField load_gauge(std::istream& in);
GaugeField load_gauge_file(const std::string& path);

/// Symmetrized lattice Dirac operator Q = [[A, B], [B^*, -A]] on C^{2 N^2}
/// with spin-major ordering: A = A0 + m0 I is the (Hermitian) gauge Laplace
/// block, B the (antihermitian) central covariant difference block.
/// Periodic boundary conditions in both directions.
class SchwingerOperator : public BlockOperator {
public:
  SchwingerOperator(double m0, GaugeField gauge);

  void apply_block(int i, int j, cspan x, mspan y) const override;

  double m0() const { return m0_; }
  const GaugeField& gauge() const { return gauge_; }

  /// y = A0 x (the mass-free diagonal block).
  void apply_gauge_laplace(cspan x, mspan y) const;

private:
  double m0_;
  GaugeField gauge_;

  void apply_a(cspan x, mspan y, double mass) const;
  void apply_b(cspan x, mspan y, bool negate) const;
};

std::unique_ptr<SchwingerOperator> schwinger(std::size_t extent, double m0,
                                             GaugeField gauge);

/// Real-axis distance certificate: every point of the quadratic numerical
/// range of Q has |Re| >= m0 + a0_min when the value is positive.
double schwinger_gap(double a0_min, double m0);

/// Operators whose quadratic numerical range is exactly {lambda1, lambda2}:
/// [[l1 I, C], [0, l2 I]] or [[l1 I, 0], [C, l2 I]].
enum class OffBlock { UpperRight, LowerLeft };

class ExtremeW2Operator : public BlockOperator {
public:
  ExtremeW2Operator(std::size_t n1, std::size_t n2, cplx lambda1, cplx lambda2,
                    dense::Matrix off, OffBlock which);

  void apply_block(int i, int j, cspan x, mspan y) const override;

  cplx lambda(int i) const { return i == 0 ? l1_ : l2_; }
  OffBlock which() const { return which_; }

private:
  cplx l1_, l2_;
  dense::Matrix off_;
  OffBlock which_;
};

std::unique_ptr<ExtremeW2Operator> extreme_w2(std::size_t n1, std::size_t n2,
                                              cplx lambda1, cplx lambda2,
                                              dense::Matrix off,
                                              OffBlock which);

/// Random off-block convenience constructor.
std::unique_ptr<ExtremeW2Operator> extreme_w2_random(std::size_t n1,
                                                     std::size_t n2,
                                                     cplx lambda1, cplx lambda2,
                                                     std::uint64_t seed,
                                                     OffBlock which);

/// Extreme eigenvalue estimates of a Hermitian operator via the Lanczos
/// tridiagonalization with full reorthogonalization. Runs until breakdown
/// or max_steps; with max_steps >= dim this is an exact tridiagonalization.
std::pair<double, double> hermitian_extremes(
    std::size_t dim, const std::function<void(cspan, mspan)>& apply,
    std::size_t max_steps, std::uint64_t seed);

/// Smallest eigenvalue of the gauge Laplace block A0 for a configuration,
/// measured to machine accuracy at experiment scales.
double measure_a0_min(const GaugeField& gauge);

}  // namespace qk
