// Command-line harness: convergence studies, numerical-range sampling,
// problem generators, and the multigrid driver. All output is CSV or plain
// key=value text; every run is deterministic in --seed.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qk/errors.hpp"
#include "qk/experiments.hpp"
#include "qk/matrix_market.hpp"
#include "qk/multigrid.hpp"
#include "qk/problems.hpp"
#include "qk/ranges.hpp"
#include "qk/solvers.hpp"

namespace {

using namespace qk;

struct ProblemFlags {
  std::string kind = "hainlust";
  std::size_t n = 1023;
  double m0 = -0.1;
  double mixing = 1.0;
  std::string gauge_file;
  std::string matrix_file;
  std::size_t n1 = 0;
  std::size_t extreme_n1 = 4, extreme_n2 = 4;
  std::vector<double> l1 = {2.0, 0.0};
  std::vector<double> l2 = {5.0, 0.0};
  std::string which = "ur";
};

void add_problem_flags(CLI::App* cmd, ProblemFlags& p) {
  cmd->add_option("--problem", p.kind, "Problem family")
      ->check(CLI::IsMember({"hainlust", "schwinger", "file", "extreme"}))
      ->capture_default_str();
  cmd->add_option("--N", p.n, "Grid points (hainlust) or lattice extent")
      ->capture_default_str();
  cmd->add_option("--m0", p.m0, "Mass shift of the lattice operator")
      ->capture_default_str();
  cmd->add_option("--mixing", p.mixing, "Gauge phase spread in [0,1]")
      ->capture_default_str();
  cmd->add_option("--gauge-file", p.gauge_file, "Load links instead of seeding");
  cmd->add_option("--matrix", p.matrix_file, "Matrix Market file (problem=file)");
  cmd->add_option("--n1", p.n1, "First block size for loaded matrices");
  cmd->add_option("--extreme-n1", p.extreme_n1, "First block size")
      ->capture_default_str();
  cmd->add_option("--extreme-n2", p.extreme_n2, "Second block size")
      ->capture_default_str();
  cmd->add_option("--l1", p.l1, "lambda1 as re im")->expected(2);
  cmd->add_option("--l2", p.l2, "lambda2 as re im")->expected(2);
  cmd->add_option("--which", p.which, "Off-diagonal block position")
      ->check(CLI::IsMember({"ur", "ll"}))
      ->capture_default_str();
}

ExperimentConfig to_config(const ProblemFlags& p, std::uint64_t seed) {
  ExperimentConfig cfg;
  if (p.kind == "hainlust") cfg.problem = ProblemKind::HainLust;
  else if (p.kind == "schwinger") cfg.problem = ProblemKind::Schwinger;
  else if (p.kind == "file") cfg.problem = ProblemKind::File;
  else cfg.problem = ProblemKind::Extreme;
  cfg.n = p.n;
  cfg.m0 = p.m0;
  cfg.mixing = p.mixing;
  cfg.gauge_file = p.gauge_file;
  cfg.matrix_file = p.matrix_file;
  cfg.n1 = p.n1;
  cfg.extreme_n1 = p.extreme_n1;
  cfg.extreme_n2 = p.extreme_n2;
  cfg.lambda1 = {p.l1[0], p.l1[1]};
  cfg.lambda2 = {p.l2[0], p.l2[1]};
  cfg.upper_right = p.which == "ur";
  cfg.seed = seed;
  return cfg;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << text;
}

void export_operator(const std::string& path, const BlockOperator& a) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  save_matrix_coordinate(out, assemble_dense(a));
}

int run_solve(const ProblemFlags& pf, const std::vector<std::string>& methods,
              const SolveOptions& sopt, std::uint64_t seed,
              const std::string& out_path) {
  ExperimentConfig cfg = to_config(pf, seed);
  cfg.solve = sopt;
  cfg.methods.clear();
  for (const std::string& m : methods) cfg.methods.push_back(method_from_name(m));
  const StudyOutcome s = run_convergence_study(cfg);
  write_output(out_path, s.csv);
  if (s.any_error) return 1;
  return s.all_converged ? 0 : 2;
}

int run_range(const ProblemFlags& pf, std::size_t samples, std::uint64_t seed,
              const std::string& out_path) {
  const ExperimentConfig cfg = to_config(pf, seed);
  const std::unique_ptr<BlockOperator> a = make_problem(cfg);
  const RangeSample w = sample_w(*a, samples, derive_seed(seed, 1));
  const RangeSample w2 = sample_w2(*a, samples, derive_seed(seed, 2));
  std::string csv = "re,im,kind\n";
  for (const cplx p : w.points)
    csv += format_double(p.real()) + "," + format_double(p.imag()) + ",w\n";
  for (const cplx p : w2.points)
    csv += format_double(p.real()) + "," + format_double(p.imag()) + ",w2\n";
  write_output(out_path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krylov solvers for 2x2 block systems with quadratic "
               "numerical range diagnostics"};
  app.require_subcommand(1);

  std::uint64_t seed = 20260101;
  std::string out_path;
  double tol = 1e-10;
  std::size_t restart = 50;
  std::size_t maxrestarts = 100;
  app.add_option("--seed", seed, "Master seed")->capture_default_str();
  app.add_option("--out", out_path, "Output file (default stdout)");
  app.add_option("--tol", tol, "Relative residual tolerance")
      ->capture_default_str();
  app.add_option("--restart", restart, "Restart length")->capture_default_str();
  app.add_option("--maxrestarts", maxrestarts, "Restart budget")
      ->capture_default_str();

  auto* solve_cmd =
      app.add_subcommand("solve", "Run a restarted-solver convergence study");
  solve_cmd->fallthrough();
  ProblemFlags solve_pf;
  add_problem_flags(solve_cmd, solve_pf);
  std::vector<std::string> methods = {"fom", "gmres", "qfom", "qqgmres",
                                      "interp"};
  std::string record = "cycle";
  solve_cmd->add_option("--method", methods, "Methods to run")
      ->delimiter(',')
      ->capture_default_str();
  solve_cmd->add_option("--record", record, "Residual recording granularity")
      ->check(CLI::IsMember({"cycle", "iter"}))
      ->capture_default_str();

  auto* range_cmd =
      app.add_subcommand("range", "Sample the numerical and quadratic ranges");
  range_cmd->fallthrough();
  ProblemFlags range_pf;
  add_problem_flags(range_cmd, range_pf);
  std::size_t samples = 10000;
  range_cmd->add_option("--samples", samples, "Draws per range")
      ->capture_default_str();

  auto* hl_cmd =
      app.add_subcommand("hainlust", "Coupled 1-D operator diagnostics");
  hl_cmd->fallthrough();
  std::size_t hl_n = 1023;
  hl_cmd->add_option("--N", hl_n, "Interior grid points")->capture_default_str();

  auto* sw_cmd =
      app.add_subcommand("schwinger", "Lattice operator diagnostics");
  sw_cmd->fallthrough();
  std::size_t sw_n = 16;
  double sw_m0 = -0.1;
  double sw_mixing = 1.0;
  std::string sw_gauge_in, sw_gauge_out;
  sw_cmd->add_option("--N", sw_n, "Lattice extent")->capture_default_str();
  sw_cmd->add_option("--m0", sw_m0, "Mass shift")->capture_default_str();
  sw_cmd->add_option("--mixing", sw_mixing, "Gauge phase spread")
      ->capture_default_str();
  sw_cmd->add_option("--gauge-file", sw_gauge_in, "Load links from file");
  sw_cmd->add_option("--gauge-out", sw_gauge_out, "Save the links used");

  auto* ex_cmd = app.add_subcommand(
      "extreme", "Operator whose quadratic range is two points");
  ex_cmd->fallthrough();
  std::size_t ex_n1 = 4, ex_n2 = 4;
  std::vector<double> ex_l1 = {2.0, 0.0}, ex_l2 = {5.0, 0.0};
  std::string ex_which = "ur";
  ex_cmd->add_option("--n1", ex_n1, "First block size")->capture_default_str();
  ex_cmd->add_option("--n2", ex_n2, "Second block size")->capture_default_str();
  ex_cmd->add_option("--l1", ex_l1, "lambda1 as re im")->expected(2);
  ex_cmd->add_option("--l2", ex_l2, "lambda2 as re im")->expected(2);
  ex_cmd->add_option("--which", ex_which, "Off-diagonal block position")
      ->check(CLI::IsMember({"ur", "ll"}))
      ->capture_default_str();

  auto* mg_cmd = app.add_subcommand("multigrid", "Geometric multigrid driver");
  mg_cmd->fallthrough();
  std::size_t mg_n = 1023;
  std::string mg_smoother = "qfom";
  std::size_t mg_nu = 1;
  double mg_tol = 1e-12;
  std::size_t mg_maxiter = 100;
  bool mg_scan = false;
  std::size_t mg_scan_min = 63, mg_scan_max = 511;
  mg_cmd->add_option("--N", mg_n, "Finest grid points (N+1 a power of two)")
      ->capture_default_str();
  mg_cmd->add_option("--smoother", mg_smoother, "Smoothing iteration")
      ->check(CLI::IsMember({"qfom", "gmres"}))
      ->capture_default_str();
  mg_cmd->add_option("--nu", mg_nu, "Krylov steps per smoother application")
      ->capture_default_str();
  mg_cmd->add_option("--tol", mg_tol, "Residual reduction target")
      ->capture_default_str();
  mg_cmd->add_option("--maxiter", mg_maxiter, "V-cycle budget")
      ->capture_default_str();
  mg_cmd->add_flag("--scan", mg_scan, "Emit N,iterations over a size sweep");
  mg_cmd->add_option("--scan-min", mg_scan_min, "Smallest N in the sweep")
      ->capture_default_str();
  mg_cmd->add_option("--scan-max", mg_scan_max, "Largest N in the sweep")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      SolveOptions sopt;
      sopt.restart = restart;
      sopt.tol = tol;
      sopt.max_restarts = maxrestarts;
      sopt.record = record == "iter" ? RecordMode::Iteration : RecordMode::Cycle;
      return run_solve(solve_pf, methods, sopt, seed, out_path);
    }
    if (range_cmd->parsed()) {
      return run_range(range_pf, samples, seed, out_path);
    }
    if (hl_cmd->parsed()) {
      const auto a = hain_lust(hl_n);
      std::string text;
      text += "N=" + std::to_string(hl_n) + "\n";
      text += "h=" + format_double(a->h()) + "\n";
      text += "alpha_min=" + format_double(alpha_min(a->h())) + "\n";
      try {
        const auto [lo, hi] = hain_lust_strip(hl_n);
        text += "strip_lo=" + format_double(lo) + "\n";
        text += "strip_hi=" + format_double(hi) + "\n";
      } catch (const NoStrip&) {
        text += "strip=none\n";
      }
      std::cout << text;
      if (!out_path.empty()) export_operator(out_path, *a);
      return 0;
    }
    if (sw_cmd->parsed()) {
      GaugeField g = sw_gauge_in.empty() ? gauge_random(sw_n, seed, sw_mixing)
                                         : load_gauge_file(sw_gauge_in);
      if (!sw_gauge_out.empty()) {
        std::ofstream out(sw_gauge_out);
        if (!out) throw ConfigError("cannot open " + sw_gauge_out);
        save_gauge(out, g);
      }
      const double a0min = measure_a0_min(g);
      const double gap = schwinger_gap(a0min, sw_m0);
      std::string text;
      text += "N=" + std::to_string(g.extent) + "\n";
      text += "m0=" + format_double(sw_m0) + "\n";
      text += "a0_min=" + format_double(a0min) + "\n";
      text += "gap=" + format_double(gap) + "\n";
      text += std::string("certificate=") +
              (gap > 0.0 ? "two-components" : "none") + "\n";
      std::cout << text;
      if (!out_path.empty()) {
        const auto q = schwinger(g.extent, sw_m0, std::move(g));
        export_operator(out_path, *q);
      }
      return 0;
    }
    if (ex_cmd->parsed()) {
      const auto a = extreme_w2_random(
          ex_n1, ex_n2, {ex_l1[0], ex_l1[1]}, {ex_l2[0], ex_l2[1]}, seed,
          ex_which == "ur" ? OffBlock::UpperRight : OffBlock::LowerLeft);
      std::cout << "n=" << a->n() << "\n"
                << "lambda1=" << format_double(ex_l1[0]) << ","
                << format_double(ex_l1[1]) << "\n"
                << "lambda2=" << format_double(ex_l2[0]) << ","
                << format_double(ex_l2[1]) << "\n";
      if (!out_path.empty()) export_operator(out_path, *a);
      return 0;
    }
    if (mg_cmd->parsed()) {
      MgStudyConfig cfg;
      cfg.n = mg_n;
      cfg.smoother.kind = mg_smoother == "qfom" ? Method::Qfom : Method::Gmres;
      cfg.smoother.nu = mg_nu;
      cfg.tol = mg_tol;
      cfg.max_cycles = mg_maxiter;
      cfg.scan = mg_scan;
      cfg.scan_min = mg_scan_min;
      cfg.scan_max = mg_scan_max;
      cfg.seed = seed;
      const StudyOutcome s = run_mg_study(cfg);
      write_output(out_path, s.csv);
      return s.all_converged ? 0 : 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
