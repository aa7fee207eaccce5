#include "rii/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rii/errors.hpp"

namespace rii {

namespace {

void require_finite(std::span<const double> xs, const char* name) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) {
      throw InvalidArgument(std::string(name) + " entry " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

TridiagonalMatrix::TridiagonalMatrix(std::vector<double> diag, std::vector<double> superdiag,
                                     std::vector<double> subdiag)
    : diag_(std::move(diag)), superdiag_(std::move(superdiag)), subdiag_(std::move(subdiag)) {
  if (diag_.empty()) throw InvalidArgument("tridiagonal matrix must have order >= 1");
  const std::size_t off = diag_.size() - 1;
  if (superdiag_.size() != off || subdiag_.size() != off) {
    throw InvalidArgument("tridiagonal matrix of order " + std::to_string(diag_.size()) +
                          " needs " + std::to_string(off) + " off-diagonal entries");
  }
  require_finite(diag_, "diagonal");
  require_finite(superdiag_, "superdiagonal");
  require_finite(subdiag_, "subdiagonal");
}

TridiagonalMatrix TridiagonalMatrix::symmetric(std::vector<double> diag,
                                               std::vector<double> offdiag) {
  auto copy = offdiag;
  return TridiagonalMatrix(std::move(diag), std::move(offdiag), std::move(copy));
}

TridiagonalMatrix TridiagonalMatrix::shifted(double c) const {
  auto d = diag_;
  for (auto& x : d) x += c;
  return TridiagonalMatrix(std::move(d), superdiag_, subdiag_);
}

TridiagonalPencil::TridiagonalPencil(TridiagonalMatrix a, TridiagonalMatrix b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.order() != b_.order()) {
    throw InvalidArgument("pencil matrices differ in order: " + std::to_string(a_.order()) +
                          " vs " + std::to_string(b_.order()));
  }
}

RiiNormalForm::RiiNormalForm(std::vector<double> v, std::vector<double> w,
                             std::vector<double> kappa, std::vector<double> lambda)
    : v_(std::move(v)), w_(std::move(w)), kappa_(std::move(kappa)), lambda_(std::move(lambda)) {
  if (v_.empty()) throw InvalidArgument("normal form must have order >= 1");
  const std::size_t off = v_.size() - 1;
  if (w_.size() != off || kappa_.size() != off || lambda_.size() != off) {
    throw InvalidArgument("normal form of order " + std::to_string(v_.size()) + " needs " +
                          std::to_string(off) + " entries in w, kappa and lambda");
  }
  require_finite(v_, "v");
  require_finite(w_, "w");
  require_finite(kappa_, "kappa");
  require_finite(lambda_, "lambda");
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (w_[i] == 0.0) throw InvalidArgument("w_" + std::to_string(i + 1) + " is zero");
  }
}

BalancedMatrix balance(const TridiagonalMatrix& m) {
  BalancedMatrix out;
  out.u.assign(m.diag().begin(), m.diag().end());
  out.w.resize(m.order() - 1);
  for (std::size_t i = 0; i + 1 < m.order(); ++i) out.w[i] = m.superdiag()[i] * m.subdiag()[i];
  return out;
}

std::vector<double> minor_ratio_sequence(const TridiagonalMatrix& b) {
  const std::size_t n = b.order();
  std::vector<double> g(n);
  g[0] = b.diag()[0];
  if (std::abs(g[0]) < kTinyDivisor) throw SingularLeadingMinor(0);
  for (std::size_t k = 1; k < n; ++k) {
    g[k] = b.diag()[k] - b.subdiag()[k - 1] * b.superdiag()[k - 1] / g[k - 1];
    if (std::abs(g[k]) < kTinyDivisor) throw SingularLeadingMinor(k);
  }
  return g;
}

void validate_pencil(const TridiagonalPencil& p) {
  const auto& b = p.b();
  for (std::size_t i = 0; i + 1 < b.order(); ++i) {
    if (b.superdiag()[i] == 0.0 || b.subdiag()[i] == 0.0) throw ZeroOffdiagonal(i);
  }
  (void)minor_ratio_sequence(b);
}

RiiNormalForm to_rii_normal_form(const TridiagonalPencil& p) {
  validate_pencil(p);
  const auto& a = p.a();
  const auto& b = p.b();
  const std::size_t n = p.order();
  const auto g = minor_ratio_sequence(b);

  std::vector<double> v(n), w(n - 1), kappa(n - 1), lambda(n - 1);
  for (std::size_t k = 0; k < n; ++k) v[k] = a.diag()[k] / g[k];
  for (std::size_t k = 1; k < n; ++k) {
    // det B_{k-1} / det B_{k+1} = 1 / (g_{k-1} g_k)
    w[k - 1] = b.superdiag()[k - 1] * b.subdiag()[k - 1] / (g[k - 1] * g[k]);
    lambda[k - 1] = a.subdiag()[k - 1] / b.subdiag()[k - 1];
  }
  for (std::size_t k = 0; k + 1 < n; ++k) kappa[k] = a.superdiag()[k] / b.superdiag()[k];
  return RiiNormalForm(std::move(v), std::move(w), std::move(kappa), std::move(lambda));
}

TridiagonalMatrix krawtchouk_matrix(std::size_t n) {
  if (n < 2) throw InvalidArgument("Krawtchouk matrix needs N >= 2");
  const double nd = static_cast<double>(n);
  std::vector<double> diag(n, (nd - 1.0) / 2.0);
  std::vector<double> off(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double kd = static_cast<double>(k);
    off[k - 1] = std::sqrt(kd * (nd - kd)) / 2.0;
  }
  return TridiagonalMatrix::symmetric(std::move(diag), std::move(off));
}

TridiagonalPencil krawtchouk_test_pencil(std::size_t n) {
  const auto k = krawtchouk_matrix(n);
  return TridiagonalPencil(k.shifted(2.0), k.shifted(1.0));
}

std::vector<double> krawtchouk_pencil_eigenvalues(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 1; k <= n; ++k) {
    out[k - 1] = static_cast<double>(k + 1) / static_cast<double>(k);
  }
  return out;
}

}  // namespace rii
