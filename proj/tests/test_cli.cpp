#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "rii/pencil_io.hpp"
#include "rii/tridiagonal.hpp"

using namespace rii;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<double> numbers(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> xs;
  for (double x; in >> x;) xs.push_back(x);
  return xs;
}

// Temporary file removed on scope exit.
struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

TempFile k_file(std::size_t n) {
  TempFile f("rii_cli_k" + std::to_string(n) + ".tdp1");
  save_tdp1(f.path, krawtchouk_test_pencil(n));
  return f;
}

}  // namespace

TEST_CASE("cli solve") {
  const auto f = k_file(5);
  SUBCASE("reference run") {
    const auto r = run({"solve", f.path, "--shift", "1.19", "--kappa", "-10000"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "1.9999999999999998\n1.4999999999999991\n1.3333333333333335\n1.25\n1.2\n");
    CHECK(r.err.find("iterations=48") != std::string::npos);
  }
  SUBCASE("shift equal to a kappa") {
    const auto nf = to_rii_normal_form(krawtchouk_test_pencil(5));
    std::ostringstream s;
    s.precision(17);
    s << nf.kappa()[1];
    const auto r = run({"solve", f.path, "--shift", s.str()});
    CHECK(r.code == 1);
    CHECK(r.err.find("InvalidShift") != std::string::npos);
  }
  SUBCASE("automatic shift") {
    const auto r = run({"solve", f.path, "--auto-shift", "--sort"});
    CHECK(r.code == 0);
    const auto it = r.err.find("iterations=");
    REQUIRE(it != std::string::npos);
    CHECK(std::stoul(r.err.substr(it + 11)) <= 200);
    const auto xs = numbers(r.out);
    REQUIRE(xs.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(xs[i] - (i + 2.0) / (i + 1.0)) < 1e-12);
  }
  SUBCASE("budget exhausted") {
    const auto r = run({"solve", f.path, "--shift", "1.19", "--max-iter", "5"});
    CHECK(r.code == 3);
    CHECK(numbers(r.out).size() == 5);
  }
  SUBCASE("breakdown") {
    TempFile bad("rii_cli_bad.tdp1");
    std::ofstream(bad.path) << "TDP1 2\n4 4\n2\n2\n2 2\n1\n1\n";
    const auto r = run({"solve", bad.path, "--shift", "0.5", "--kappa", "-10"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("Breakdown") != std::string::npos);
  }
  SUBCASE("trace file") {
    TempFile csv("rii_cli_trace.csv");
    const auto r = run({"solve", f.path, "--shift", "1.19", "--kappa", "-10000", "--trace", csv.path});
    CHECK(r.code == 0);
    std::ifstream in(csv.path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,n,q,e,v,w");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 49 * 5);
  }
  SUBCASE("general step") {
    const auto r = run({"solve", f.path, "--shift", "1.19", "--kappa", "-10000", "--general-step"});
    CHECK(r.code == 0);
  }
  SUBCASE("usage errors") {
    CHECK(run({"solve", f.path}).code == 1);
    CHECK(run({"solve", f.path, "--shift", "1", "--auto-shift"}).code == 1);
    CHECK(run({"solve", "missing.tdp1", "--shift", "1"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
  }
  SUBCASE("determinism") {
    const auto a = run({"solve", f.path, "--shift", "1.19"});
    const auto b = run({"solve", f.path, "--shift", "1.19"});
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}

TEST_CASE("cli help and version") {
  CHECK(run({"--help"}).code == 0);
  const auto sub = run({"solve", "--help"});
  CHECK(sub.code == 0);
  CHECK(sub.out.find("--auto-shift") != std::string::npos);
  CHECK(run({"--version"}).out == "0.1.0\n");
}

TEST_CASE("cli gen") {
  SUBCASE("N = 5 to stdout") {
    const auto r = run({"gen", "--n", "5"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    const auto p = read_tdp1(in);
    for (double d : p.a().diag()) CHECK(d == 4.0);
    for (double d : p.b().diag()) CHECK(d == 3.0);
  }
  SUBCASE("N = 2 is seven lines") {
    const auto r = run({"gen", "--n", "2"});
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);
  }
  SUBCASE("round trip through a file") {
    TempFile f("rii_cli_gen.tdp1");
    CHECK(run({"gen", "--family", "krawtchouk", "--n", "9", "--out", f.path}).code == 0);
    CHECK(load_tdp1(f.path) == krawtchouk_test_pencil(9));
  }
}

TEST_CASE("cli gen, solve and oracle agree") {
  for (std::size_t n : {2u, 5u, 16u, 33u, 64u}) {
    CAPTURE(n);
    TempFile f("rii_cli_pipe.tdp1");
    REQUIRE(run({"gen", "--n", std::to_string(n), "--out", f.path}).code == 0);
    const auto solved = run({"solve", f.path, "--auto-shift", "--sort"});
    const auto oracle = run({"oracle", f.path});
    REQUIRE(solved.code == 0);
    REQUIRE(oracle.code == 0);
    const auto a = numbers(solved.out), b = numbers(oracle.out);
    REQUIRE(a.size() == n);
    REQUIRE(b.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
  }
}

TEST_CASE("cli dqds and oracle on a matrix") {
  TempFile f("rii_cli_k.tdm1");
  save_tdm1(f.path, krawtchouk_matrix(16));
  const auto r = run({"dqds", f.path, "--shift", "-0.1"});
  CHECK(r.code == 0);
  const auto xs = numbers(r.out);
  REQUIRE(xs.size() == 16);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(xs[i] - (15 - i)) < 1e-10);
  CHECK(run({"dqds", f.path}).code == 0);
  const auto o = numbers(run({"oracle", f.path}).out);
  REQUIRE(o.size() == 16);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(o[i] - (15 - i)) < 1e-10);

  TempFile csv("rii_cli_qd.csv");
  CHECK(run({"dqds", f.path, "--trace", csv.path}).code == 0);
  std::ifstream in(csv.path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,n,q,e");
}

TEST_CASE("cli verify") {
  const auto ok = run({"verify", "--family", "krawtchouk", "--n", "4"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  CHECK(ok.out.find("closed_form_q") != std::string::npos);
  const auto f = k_file(3);
  CHECK(run({"verify", f.path, "--shift", "1.2", "--no-toda"}).code == 0);
  CHECK(run({"verify"}).code == 1);
  CHECK(run({"verify", "--family", "krawtchouk", "--n", "11"}).code == 1);
}

TEST_CASE("cli bench") {
  const auto r = run({"bench", "--family", "krawtchouk", "--sizes", "2,8", "--shift-rule", "paper"});
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "N,seconds,max_rel_err,mean_rel_err,iters");
  std::getline(in, line);
  CHECK(line.rfind("2,", 0) == 0);
  std::istringstream row(line);
  std::vector<std::string> cols;
  for (std::string c; std::getline(row, c, ',');) cols.push_back(c);
  REQUIRE(cols.size() == 5);
  CHECK(std::stod(cols[2]) <= 1e-15);
  CHECK(run({"bench", "--sizes", "1"}).code == 1);
}
