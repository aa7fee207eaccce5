#pragma once

#include <cstddef>
#include <vector>

#include "rii/tridiagonal.hpp"

namespace rii {

/// phi_0(x)..phi_N(x) and their derivatives at a single point.
struct CharPolyEval {
  std::vector<double> values;
  std::vector<double> derivs;
  bool overflow = false;  // some |phi_n| exceeded kCharPolyOverflow
};

inline constexpr double kCharPolyOverflow = 1e290;

/// Monic R_II recurrence
///   phi_{n+1} = ((1+w_n)x - v_n) phi_n - w_n (x - kappa_{n-1})(x - lambda_n) phi_{n-1}
/// with w_0 = 0, evaluated with derivatives.
CharPolyEval eval_charpoly(const RiiNormalForm& nf, double x);

/// phi_{n+1} = (x - u_n) phi_n - w_n phi_{n-1}, the characteristic polynomials
/// of the leading principal submatrices.
CharPolyEval eval_charpoly(const BalancedMatrix& m, double x);

struct RootSearchOptions {
  double tol = 1e-13;                   // bracket width at which bisection stops
  std::size_t max_points = 1u << 22;    // cap on refinement of the sign scan
  int newton_steps = 5;
};

struct RootSearchResult {
  std::vector<double> roots;  // ascending
  bool complete = false;      // roots.size() == N
  std::size_t points = 0;     // scan resolution that produced the result
};

/// Real zeros of phi_N on [lo, hi]: uniform sign scan of max(64N, 1024) points,
/// refined by doubling while fewer than N brackets are found, then bisection
/// and a Newton polish that never leaves its bracket.
///
/// Throws WindowTooSmall when roots are missing and the endpoint signs show
/// that some lie outside the window.
RootSearchResult real_roots(const RiiNormalForm& nf, double lo, double hi,
                            const RootSearchOptions& opts = {});
RootSearchResult real_roots(const BalancedMatrix& m, double lo, double hi,
                            const RootSearchOptions& opts = {});

/// ((-1)^n phi_n(s) > 0) for n = 0..N.
std::vector<bool> sign_condition(const RiiNormalForm& nf, double s);

struct Window {
  double lo;
  double hi;
};

/// Row-wise bound |x| <= max_i (|a_ii| + r_A,i) / (|b_ii| - r_B,i), widened by 1.
/// Throws InvalidArgument when some denominator is not positive.
Window default_window(const TridiagonalPencil& p);

/// Gershgorin interval of a single matrix, widened by 1.
Window default_window(const TridiagonalMatrix& m);

}  // namespace rii
