#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "rii/chain.hpp"
#include "rii/charpoly.hpp"
#include "rii/dqds.hpp"
#include "rii/errors.hpp"
#include "rii/pencil_io.hpp"
#include "rii/trace_csv.hpp"
#include "rii/tridiagonal.hpp"
#include "rii/verify.hpp"

namespace rii::cli {

namespace {

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void print_values(std::ostream& out, std::vector<double> xs, bool sort_desc) {
  if (sort_desc) std::sort(xs.begin(), xs.end(), std::greater<>());
  const auto prec = out.precision();
  out << std::setprecision(17);
  for (double x : xs) out << x << '\n';
  out.precision(prec);
}

std::size_t auto_stride(std::size_t n) { return n > 64 ? 10 : 1; }

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
  std::string input;
  std::optional<double> shift;
  bool auto_shift = false;
  double margin = 1e-2;
  std::optional<double> kappa;
  std::vector<double> kappa_seq;
  double tol = 1e-20;
  std::size_t max_iter = 1'000'000;
  std::string trace;
  std::size_t trace_stride = 0;
  bool general_step = false;
  bool sort = false;
};

void add_solve(CLI::App& app, SolveArgs& a) {
  auto* sub = app.add_subcommand("solve", "Generalized eigenvalues of a TDP1 pencil");
  sub->add_option("input", a.input, "TDP1 pencil file")->required();
  auto* shift = sub->add_option("--shift", a.shift, "Fixed origin shift s");
  auto* autos = sub->add_flag("--auto-shift", a.auto_shift,
                              "Shift just below the smallest eigenvalue from the oracle");
  shift->excludes(autos);
  sub->add_option("--margin", a.margin, "Relative margin for --auto-shift")->needs(autos);
  auto* kappa = sub->add_option("--kappa", a.kappa, "Every new kappa (default -1e4*max(1,|s|))");
  sub->add_option("--kappa-seq", a.kappa_seq,
                  "Comma-separated kappa_{N-1}, kappa_N, ...; the last value repeats")
      ->delimiter(',')
      ->excludes(kappa);
  sub->add_option("--tol", a.tol, "Convergence threshold on |w_n| and |lambda_n w_n|");
  sub->add_option("--max-iter", a.max_iter, "Iteration budget");
  sub->add_option("--trace", a.trace, "Write t,n,q,e,v,w CSV to this path");
  sub->add_option("--trace-stride", a.trace_stride,
                  "Record every k-th step (default 1, or 10 when N > 64)");
  sub->add_flag("--general-step", a.general_step, "Use the direct recurrence instead");
  sub->add_flag("--sort", a.sort, "Print eigenvalues in descending order");
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.shift && !a.auto_shift) {
    err << "error: one of --shift or --auto-shift is required\n";
    return kUsage;
  }
  const auto pencil = load_tdp1(a.input);
  SolveConfig cfg;
  if (a.auto_shift) {
    cfg.shift = AutoLowerBoundShift{a.margin};
  } else {
    cfg.shift = FixedShift{*a.shift};
  }
  if (a.kappa) cfg.kappa = FixedKappa{*a.kappa};
  if (!a.kappa_seq.empty()) cfg.kappa = KappaSequence{a.kappa_seq};
  cfg.tol = a.tol;
  cfg.max_iter = a.max_iter;
  cfg.trace = !a.trace.empty();
  cfg.trace_stride = a.trace_stride ? a.trace_stride : auto_stride(pencil.order());
  cfg.use_general_step = a.general_step;

  const auto report = solve(pencil, cfg);
  if (cfg.trace) save_trace_csv(a.trace, report.trace);
  err << "iterations=" << report.iterations << " shift=" << shortest(report.initial_shift)
      << " kappa=" << shortest(report.kappa_last) << '\n';
  if (report.breakdown) {
    err << "error: " << *report.breakdown << " at t=" << report.iterations << '\n';
    return kBreakdown;
  }
  print_values(out, report.eigenvalues, a.sort);
  if (!report.converged) {
    err << "error: no convergence within " << a.max_iter << " iterations\n";
    return kMaxIter;
  }
  return kOk;
}

// ---- dqds ----------------------------------------------------------------

struct DqdsArgs {
  std::string input;
  std::optional<double> shift;
  double tol = 1e-14;
  std::size_t max_iter = 1'000'000;
  std::string trace;
  std::size_t trace_stride = 0;
  bool sort = false;
};

void add_dqds(CLI::App& app, DqdsArgs& a) {
  auto* sub = app.add_subcommand("dqds", "Eigenvalues of a TDM1 matrix by the dqds baseline");
  sub->add_option("input", a.input, "TDM1 matrix file")->required();
  sub->add_option("--shift", a.shift, "Fixed shift (default: Gershgorin lower bound minus 1)");
  sub->add_option("--tol", a.tol, "Convergence threshold on |e_n|");
  sub->add_option("--max-iter", a.max_iter, "Iteration budget");
  sub->add_option("--trace", a.trace, "Write t,n,q,e CSV to this path");
  sub->add_option("--trace-stride", a.trace_stride, "Record every k-th step");
  sub->add_flag("--sort", a.sort, "Print eigenvalues in descending order");
}

int cmd_dqds(const DqdsArgs& a, std::ostream& out, std::ostream& err) {
  const auto m = load_tdm1(a.input);
  QdConfig cfg;
  cfg.shift = a.shift ? *a.shift : default_window(m).lo;
  cfg.tol = a.tol;
  cfg.max_iter = a.max_iter;
  cfg.trace = !a.trace.empty();
  cfg.trace_stride = a.trace_stride ? a.trace_stride : auto_stride(m.order());
  const auto report = dqds_solve(m, cfg);
  if (cfg.trace) save_trace_csv(a.trace, report.trace);
  err << "iterations=" << report.iterations << " shift=" << shortest(cfg.shift) << '\n';
  if (report.breakdown) {
    err << "error: " << *report.breakdown << " at t=" << report.iterations << '\n';
    return kBreakdown;
  }
  print_values(out, report.eigenvalues, a.sort);
  if (!report.converged) {
    err << "error: no convergence within " << a.max_iter << " iterations\n";
    return kMaxIter;
  }
  return kOk;
}

// ---- oracle --------------------------------------------------------------

struct OracleArgs {
  std::string input;
  std::optional<double> lo, hi;
  double tol = 1e-13;
};

void add_oracle(CLI::App& app, OracleArgs& a) {
  auto* sub = app.add_subcommand(
      "oracle", "Real eigenvalues from the characteristic polynomial (TDP1 or TDM1 input)");
  sub->add_option("input", a.input, "TDP1 or TDM1 file")->required();
  auto* lo = sub->add_option("--lo", a.lo, "Lower end of the search window");
  auto* hi = sub->add_option("--hi", a.hi, "Upper end of the search window");
  lo->needs(hi);
  hi->needs(lo);
  sub->add_option("--tol", a.tol, "Bisection bracket width");
}

std::string read_magic(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for reading");
  std::string magic;
  f >> magic;
  return magic;
}

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  RootSearchOptions opts;
  opts.tol = a.tol;
  RootSearchResult res;
  std::size_t n = 0;
  if (read_magic(a.input) == "TDM1") {
    const auto m = load_tdm1(a.input);
    const Window w = a.lo ? Window{*a.lo, *a.hi} : default_window(m);
    n = m.order();
    res = real_roots(balance(m), w.lo, w.hi, opts);
  } else {
    const auto p = load_tdp1(a.input);
    const Window w = a.lo ? Window{*a.lo, *a.hi} : default_window(p);
    n = p.order();
    res = real_roots(to_rii_normal_form(p), w.lo, w.hi, opts);
  }
  print_values(out, res.roots, true);
  err << "roots=" << res.roots.size() << " of " << n << " scan_points=" << res.points << '\n';
  if (!res.complete) err << "warning: some eigenvalues are not real or not isolated\n";
  return kOk;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  std::string input;
  std::string family;
  std::size_t n = 4;
  std::optional<double> shift;
  double kappa = -1e4;
  std::size_t steps = 5;
  bool no_toda = false;
  std::optional<double> toda_shift;
};

void add_verify(CLI::App& app, VerifyArgs& a) {
  auto* sub = app.add_subcommand(
      "verify", "Compare the iteration with its determinant solution and check identities");
  auto* in = sub->add_option("input", a.input, "TDP1 pencil file");
  auto* fam = sub->add_option("--family", a.family, "Built-in pencil instead of a file")
                  ->check(CLI::IsMember({"krawtchouk"}));
  in->excludes(fam);
  sub->add_option("--n", a.n, "Order of the built-in pencil")->needs(fam);
  sub->add_option("--shift", a.shift, "Fixed shift (default: automatic lower bound)");
  sub->add_option("--kappa", a.kappa, "Every new kappa");
  sub->add_option("--steps", a.steps, "Number of chain steps to compare");
  sub->add_flag("--no-toda", a.no_toda, "Skip the dqds / Toda comparison on B");
  sub->add_option("--toda-shift", a.toda_shift, "Shift for the Toda part (default min eig - 0.5)");
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (a.input.empty() && a.family.empty()) {
    err << "error: give a TDP1 file or --family\n";
    return kUsage;
  }
  const auto pencil = a.input.empty() ? krawtchouk_test_pencil(a.n) : load_tdp1(a.input);
  VerifyOptions opts;
  opts.shift = a.shift;
  opts.kappa = a.kappa;
  opts.steps = a.steps;
  opts.toda = !a.no_toda;
  opts.toda_shift = a.toda_shift;
  const auto report = verify_closed_form(pencil, opts);

  out << "shift=" << shortest(report.shift) << " kappa=" << shortest(a.kappa)
      << " steps=" << a.steps << '\n';
  out << std::left << std::setw(24) << "check" << std::setw(14) << "max_residual"
      << std::setw(11) << "tolerance" << std::setw(9) << "samples" << "result\n";
  for (const auto& r : report.rows) {
    std::ostringstream res;
    res << std::setprecision(3) << std::scientific << r.max_residual;
    std::ostringstream tol;
    tol << std::setprecision(0) << std::scientific << r.tolerance;
    out << std::left << std::setw(24) << r.name << std::setw(14) << res.str() << std::setw(11)
        << tol.str() << std::setw(9) << r.samples
        << (r.note.empty() ? (r.pass ? "PASS" : "FAIL") : "SKIP (" + r.note + ")") << '\n';
  }
  return report.all_pass() ? kOk : kVerifyFailed;
}

// ---- bench ---------------------------------------------------------------

struct BenchArgs {
  std::string family = "krawtchouk";
  std::vector<std::size_t> sizes{512};
  std::string shift_rule = "paper";
  double kappa = -1e4;
  double tol = 1e-20;
  std::size_t max_iter = 1'000'000;
  std::size_t repeat = 1;
};

void add_bench(CLI::App& app, BenchArgs& a) {
  auto* sub = app.add_subcommand("bench", "Timing and accuracy on the Krawtchouk family");
  sub->add_option("--family", a.family, "Pencil family")->check(CLI::IsMember({"krawtchouk"}));
  sub->add_option("--sizes", a.sizes, "Comma-separated orders")->delimiter(',');
  sub->add_option("--shift-rule", a.shift_rule, "paper: s = (N+2)/(N+1)")
      ->check(CLI::IsMember({"paper"}));
  sub->add_option("--kappa", a.kappa, "Every new kappa");
  sub->add_option("--tol", a.tol, "Convergence threshold");
  sub->add_option("--max-iter", a.max_iter, "Iteration budget");
  sub->add_option("--repeat", a.repeat, "Repetitions; the minimum time is reported")
      ->check(CLI::PositiveNumber);
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  for (std::size_t n : a.sizes) {
    if (n < 2) {
      err << "error: bench sizes must be >= 2, got " << n << '\n';
      return kUsage;
    }
  }
  int status = kOk;
  out << "N,seconds,max_rel_err,mean_rel_err,iters\n";
  for (std::size_t n : a.sizes) {
    const auto pencil = krawtchouk_test_pencil(n);
    const auto exact = krawtchouk_pencil_eigenvalues(n);
    const double nd = static_cast<double>(n);
    SolveConfig cfg;
    cfg.shift = FixedShift{(nd + 2.0) / (nd + 1.0)};
    cfg.kappa = FixedKappa{a.kappa};
    cfg.tol = a.tol;
    cfg.max_iter = a.max_iter;

    double best = std::numeric_limits<double>::infinity();
    SolveReport report;
    try {
      for (std::size_t r = 0; r < a.repeat; ++r) {
        const auto start = std::chrono::steady_clock::now();
        report = solve(pencil, cfg);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        best = std::min(best, dt.count());
      }
    } catch (const Error& e) {
      err << "N=" << n << ": " << e.what() << '\n';
      out << n << ",nan,nan,nan,0\n";
      status = kBreakdown;
      continue;
    }
    if (!report.converged) {
      err << "N=" << n << ": "
          << (report.breakdown ? *report.breakdown : std::string("no convergence")) << '\n';
      out << n << ',' << shortest(best) << ",nan,nan," << report.iterations << '\n';
      status = report.breakdown ? kBreakdown : kMaxIter;
      continue;
    }
    double max_err = 0.0, sum_err = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double rel = std::abs(report.eigenvalues[k] - exact[k]) / std::abs(exact[k]);
      max_err = std::max(max_err, rel);
      sum_err += rel;
    }
    out << n << ',' << shortest(best) << ',' << shortest(max_err) << ','
        << shortest(sum_err / nd) << ',' << report.iterations << '\n';
  }
  return status;
}

// ---- gen -----------------------------------------------------------------

struct GenArgs {
  std::string family = "krawtchouk";
  std::size_t n = 0;
  std::string out;
};

void add_gen(CLI::App& app, GenArgs& a) {
  auto* sub = app.add_subcommand("gen", "Write a test pencil (K_N + 2I, K_N + I) as TDP1");
  sub->add_option("--family", a.family, "Pencil family")->check(CLI::IsMember({"krawtchouk"}));
  sub->add_option("--n", a.n, "Order N >= 2")->required();
  sub->add_option("--out", a.out, "Output path (default stdout)");
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const auto pencil = krawtchouk_test_pencil(a.n);
  if (a.out.empty()) {
    write_tdp1(out, pencil);
  } else {
    save_tdp1(a.out, pencil);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Generalized eigenvalues of tridiagonal pencils by the R_II chain", "rii-gev");
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  SolveArgs solve_args;
  DqdsArgs dqds_args;
  OracleArgs oracle_args;
  VerifyArgs verify_args;
  BenchArgs bench_args;
  GenArgs gen_args;
  add_solve(app, solve_args);
  add_dqds(app, dqds_args);
  add_oracle(app, oracle_args);
  add_verify(app, verify_args);
  add_bench(app, bench_args);
  add_gen(app, gen_args);

  std::vector<const char*> argv{"rii-gev"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "solve") return cmd_solve(solve_args, out, err);
    if (name == "dqds") return cmd_dqds(dqds_args, out, err);
    if (name == "oracle") return cmd_oracle(oracle_args, out, err);
    if (name == "verify") return cmd_verify(verify_args, out, err);
    if (name == "bench") return cmd_bench(bench_args, out, err);
    return cmd_gen(gen_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace rii::cli
