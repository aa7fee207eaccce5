#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rii {

/// Divisors with magnitude below this are treated as exact zeros.
inline constexpr double kTinyDivisor = 1e-300;

/// Real tridiagonal matrix of order n stored as three diagonals.
///
/// superdiag[i] is the (i, i+1) entry and subdiag[i] the (i+1, i) entry.
/// Construction enforces the length invariants and rejects NaN/Inf.
class TridiagonalMatrix {
 public:
  TridiagonalMatrix(std::vector<double> diag, std::vector<double> superdiag,
                    std::vector<double> subdiag);

  static TridiagonalMatrix symmetric(std::vector<double> diag, std::vector<double> offdiag);

  std::size_t order() const noexcept { return diag_.size(); }
  std::span<const double> diag() const noexcept { return diag_; }
  std::span<const double> superdiag() const noexcept { return superdiag_; }
  std::span<const double> subdiag() const noexcept { return subdiag_; }

  /// Returns this + c*I.
  TridiagonalMatrix shifted(double c) const;

  bool operator==(const TridiagonalMatrix&) const = default;

 private:
  std::vector<double> diag_;
  std::vector<double> superdiag_;
  std::vector<double> subdiag_;
};

/// The pair (A, B) whose generalized eigenvalues solve det(xB - A) = 0.
class TridiagonalPencil {
 public:
  TridiagonalPencil(TridiagonalMatrix a, TridiagonalMatrix b);

  std::size_t order() const noexcept { return a_.order(); }
  const TridiagonalMatrix& a() const noexcept { return a_; }
  const TridiagonalMatrix& b() const noexcept { return b_; }

  bool operator==(const TridiagonalPencil&) const = default;

 private:
  TridiagonalMatrix a_;
  TridiagonalMatrix b_;
};

/// Monic normal form of a pencil.
///
///   A = | v_0      kappa_0                      |   B = | 1    1                |
///       | l_1 w_1  v_1      kappa_1             |       | w_1  1+w_1  1         |
///       |          l_2 w_2  v_2      ...        |       |      w_2    1+w_2 ... |
///
/// The B side is implied by w. Storage is zero-based: w()[n-1] holds w_n and
/// lambda()[n-1] holds lambda_n for n = 1..N-1; kappa()[n] holds kappa_n for
/// n = 0..N-2.
class RiiNormalForm {
 public:
  RiiNormalForm(std::vector<double> v, std::vector<double> w, std::vector<double> kappa,
                std::vector<double> lambda);

  std::size_t order() const noexcept { return v_.size(); }
  std::span<const double> v() const noexcept { return v_; }
  std::span<const double> w() const noexcept { return w_; }
  std::span<const double> kappa() const noexcept { return kappa_; }
  std::span<const double> lambda() const noexcept { return lambda_; }

  /// w_n with the convention w_0 = 0.
  double w_at(std::size_t n) const noexcept { return n == 0 ? 0.0 : w_[n - 1]; }

 private:
  std::vector<double> v_;
  std::vector<double> w_;
  std::vector<double> kappa_;
  std::vector<double> lambda_;
};

/// Tridiagonal matrix with unit superdiagonal: diag u_0..u_{N-1}, subdiag w_1..w_{N-1}.
struct BalancedMatrix {
  std::vector<double> u;
  std::vector<double> w;  // w[n-1] holds w_n

  std::size_t order() const noexcept { return u.size(); }
};

/// Similarity U B U^{-1} with U the cumulative superdiagonal products; the
/// subdiagonal becomes b_{n-1,n} b_{n,n-1}.
BalancedMatrix balance(const TridiagonalMatrix& m);

/// Throws ZeroOffdiagonal or SingularLeadingMinor when the pencil cannot be
/// brought to normal form.
void validate_pencil(const TridiagonalPencil& p);

/// g_n = det B_{n+1} / det B_n via the forward pivot recurrence.
std::vector<double> minor_ratio_sequence(const TridiagonalMatrix& b);

RiiNormalForm to_rii_normal_form(const TridiagonalPencil& p);

/// Symmetric Krawtchouk matrix K_N with eigenvalues 0, 1, ..., N-1.
TridiagonalMatrix krawtchouk_matrix(std::size_t n);

/// (K_N + 2I, K_N + I), generalized eigenvalues (n+1)/n for n = 1..N.
TridiagonalPencil krawtchouk_test_pencil(std::size_t n);

/// Exact eigenvalues of krawtchouk_test_pencil(n) in descending order.
std::vector<double> krawtchouk_pencil_eigenvalues(std::size_t n);

}  // namespace rii
