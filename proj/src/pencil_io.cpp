#include "rii/pencil_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "rii/errors.hpp"

namespace rii {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Missing trailing lines read as empty so an order-1 file may omit its
  // empty off-diagonal lines.
  std::string next() {
    ++line_;
    std::string s;
    if (!std::getline(in_, s)) return {};
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::vector<std::string> split(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

std::vector<double> parse_values(LineReader& r, std::size_t expected, const char* what) {
  const auto toks = split(r.next());
  if (toks.size() != expected) {
    throw ParseError(std::string(what) + ": expected " + std::to_string(expected) +
                         " values, got " + std::to_string(toks.size()),
                     r.line());
  }
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    const auto& t = toks[i];
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out[i]);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
      throw ParseError(std::string(what) + ": value " + std::to_string(i) + " '" + t +
                           "' is not a number",
                       r.line());
    }
    if (!std::isfinite(out[i])) {
      throw ParseError(std::string(what) + ": value " + std::to_string(i) + " is not finite",
                       r.line());
    }
  }
  return out;
}

std::size_t parse_header(LineReader& r, const std::string& magic) {
  const auto toks = split(r.next());
  if (toks.size() != 2 || toks[0] != magic) {
    throw ParseError("expected header '" + magic + " N'", r.line());
  }
  std::size_t n = 0;
  const auto& t = toks[1];
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
  if (ec != std::errc{} || ptr != t.data() + t.size() || n == 0) {
    throw ParseError("order must be a positive integer, got '" + t + "'", r.line());
  }
  return n;
}

TridiagonalMatrix parse_matrix(LineReader& r, std::size_t n, const char* name) {
  const std::string base(name);
  auto d = parse_values(r, n, (base + " diagonal").c_str());
  auto sup = parse_values(r, n - 1, (base + " superdiagonal").c_str());
  auto sub = parse_values(r, n - 1, (base + " subdiagonal").c_str());
  return TridiagonalMatrix(std::move(d), std::move(sup), std::move(sub));
}

void write_line(std::ostream& out, std::span<const double> xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ' ';
    out << xs[i];
  }
  out << '\n';
}

void write_matrix(std::ostream& out, const TridiagonalMatrix& m) {
  write_line(out, m.diag());
  write_line(out, m.superdiag());
  write_line(out, m.subdiag());
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for reading");
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

TridiagonalPencil read_tdp1(std::istream& in) {
  LineReader r(in);
  const auto n = parse_header(r, "TDP1");
  auto a = parse_matrix(r, n, "A");
  auto b = parse_matrix(r, n, "B");
  return TridiagonalPencil(std::move(a), std::move(b));
}

void write_tdp1(std::ostream& out, const TridiagonalPencil& p) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "TDP1 " << p.order() << '\n';
  write_matrix(out, p.a());
  write_matrix(out, p.b());
  out.flags(flags);
  out.precision(prec);
}

TridiagonalMatrix read_tdm1(std::istream& in) {
  LineReader r(in);
  const auto n = parse_header(r, "TDM1");
  auto d = parse_values(r, n, "diagonal");
  auto off = parse_values(r, n - 1, "off-diagonal");
  return TridiagonalMatrix::symmetric(std::move(d), std::move(off));
}

void write_tdm1(std::ostream& out, const TridiagonalMatrix& m) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "TDM1 " << m.order() << '\n';
  write_line(out, m.diag());
  write_line(out, m.superdiag());
  out.flags(flags);
  out.precision(prec);
}

TridiagonalPencil load_tdp1(const std::string& path) {
  auto f = open_in(path);
  return read_tdp1(f);
}

void save_tdp1(const std::string& path, const TridiagonalPencil& p) {
  auto f = open_out(path);
  write_tdp1(f, p);
  if (!f) throw Error("write to '" + path + "' failed");
}

TridiagonalMatrix load_tdm1(const std::string& path) {
  auto f = open_in(path);
  return read_tdm1(f);
}

void save_tdm1(const std::string& path, const TridiagonalMatrix& m) {
  auto f = open_out(path);
  write_tdm1(f, m);
  if (!f) throw Error("write to '" + path + "' failed");
}

}  // namespace rii
