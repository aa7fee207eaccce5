#include "rii/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rii/errors.hpp"

namespace rii {

namespace {

// Coefficients of phi_{n+1} = a phi_n - b phi_{n-1} and their x-derivatives.
struct Step {
  double a, da, b, db;
};

struct RiiRecurrence {
  const RiiNormalForm& nf;

  std::size_t order() const { return nf.order(); }

  Step operator()(std::size_t n, double x) const {
    const double wn = nf.w_at(n);
    Step s{(1.0 + wn) * x - nf.v()[n], 1.0 + wn, 0.0, 0.0};
    if (n > 0) {
      const double kap = nf.kappa()[n - 1];
      const double lam = nf.lambda()[n - 1];
      s.b = wn * (x - kap) * (x - lam);
      s.db = wn * ((x - kap) + (x - lam));
    }
    return s;
  }
};

struct MatrixRecurrence {
  const BalancedMatrix& m;

  std::size_t order() const { return m.order(); }

  Step operator()(std::size_t n, double x) const {
    return Step{x - m.u[n], 1.0, n > 0 ? m.w[n - 1] : 0.0, 0.0};
  }
};

template <class Rec>
CharPolyEval evaluate(const Rec& rec, double x) {
  const std::size_t n = rec.order();
  CharPolyEval out;
  out.values.assign(n + 1, 0.0);
  out.derivs.assign(n + 1, 0.0);
  out.values[0] = 1.0;
  double prev = 0.0, dprev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Step s = rec(k, x);
    const double cur = out.values[k], dcur = out.derivs[k];
    out.values[k + 1] = s.a * cur - s.b * prev;
    out.derivs[k + 1] = s.da * cur + s.a * dcur - s.db * prev - s.b * dprev;
    prev = cur;
    dprev = dcur;
    if (!(std::abs(out.values[k + 1]) <= kCharPolyOverflow)) out.overflow = true;
  }
  return out;
}

// Same recurrence with a common positive rescaling of (phi_n, phi_{n-1},
// phi'_n, phi'_{n-1}) whenever magnitudes drift. Signs and the Newton ratio
// phi_N / phi'_N are unaffected.
struct ScaledEval {
  std::vector<int> signs;  // sign of phi_n, n = 0..N
  double newton = 0.0;     // phi_N / phi'_N (0 when phi_N == 0)
};

template <class Rec>
ScaledEval evaluate_scaled(const Rec& rec, double x, bool want_signs) {
  constexpr double kBig = 0x1p+500;
  constexpr double kSmall = 0x1p-500;
  const std::size_t n = rec.order();
  ScaledEval out;
  if (want_signs) {
    out.signs.assign(n + 1, 0);
    out.signs[0] = 1;
  }
  double cur = 1.0, dcur = 0.0, prev = 0.0, dprev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Step s = rec(k, x);
    const double next = s.a * cur - s.b * prev;
    const double dnext = s.da * cur + s.a * dcur - s.db * prev - s.b * dprev;
    prev = cur;
    dprev = dcur;
    cur = next;
    dcur = dnext;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag > kBig || (mag < kSmall && mag > 0.0)) {
      const double scale = mag > kBig ? kSmall : kBig;
      cur *= scale;
      prev *= scale;
      dcur *= scale;
      dprev *= scale;
    }
    if (want_signs) out.signs[k + 1] = (cur > 0.0) - (cur < 0.0);
  }
  if (!want_signs) {
    out.signs.assign(1, (cur > 0.0) - (cur < 0.0));
  }
  out.newton = cur == 0.0 ? 0.0 : cur / dcur;
  return out;
}

template <class Rec>
int sign_at(const Rec& rec, double x) {
  return evaluate_scaled(rec, x, false).signs.back();
}

template <class Rec>
double refine(const Rec& rec, double lo, double hi, int sign_lo, const RootSearchOptions& opts) {
  while (hi - lo > opts.tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int sm = sign_at(rec, mid);
    if (sm == 0) return mid;
    if (sm == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < opts.newton_steps; ++i) {
    const double ratio = evaluate_scaled(rec, x, false).newton;
    if (ratio == 0.0 || !std::isfinite(ratio)) break;
    const double next = x - ratio;
    if (!(next >= lo && next <= hi)) break;
    if (next == x) break;
    x = next;
  }
  return x;
}

template <class Rec>
RootSearchResult find_roots(const Rec& rec, double lo, double hi, const RootSearchOptions& opts) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("root window must satisfy lo < hi");
  }
  if (!(opts.tol > 0.0)) throw InvalidArgument("root tolerance must be positive");
  const std::size_t n = rec.order();
  std::size_t points = std::max<std::size_t>(64 * n, 1024);

  struct Bracket {
    double lo, hi;
    int sign_lo;
  };
  std::vector<Bracket> brackets;
  std::vector<double> exact;
  for (;;) {
    brackets.clear();
    exact.clear();
    const double h = (hi - lo) / static_cast<double>(points - 1);
    double xprev = lo;
    int sprev = sign_at(rec, lo);
    if (sprev == 0) exact.push_back(lo);
    for (std::size_t j = 1; j < points; ++j) {
      const double x = j + 1 == points ? hi : lo + h * static_cast<double>(j);
      const int sx = sign_at(rec, x);
      if (sx == 0) {
        exact.push_back(x);
      } else if (sprev * sx < 0) {
        brackets.push_back({xprev, x, sprev});
      }
      xprev = x;
      sprev = sx;
    }
    if (brackets.size() + exact.size() >= n || 2 * points - 1 > opts.max_points) break;
    points = 2 * points - 1;
  }

  RootSearchResult out;
  out.points = points;
  out.roots = exact;
  for (const auto& b : brackets) out.roots.push_back(refine(rec, b.lo, b.hi, b.sign_lo, opts));
  std::sort(out.roots.begin(), out.roots.end());
  out.complete = out.roots.size() == n;

  if (!out.complete) {
    const int s_hi = sign_at(rec, hi);
    const int s_lo = sign_at(rec, lo);
    const int expect_lo = n % 2 == 0 ? 1 : -1;
    if (s_hi < 0 || (s_lo != 0 && s_lo != expect_lo)) {
      throw WindowTooSmall("found " + std::to_string(out.roots.size()) + " of " +
                           std::to_string(n) + " roots and the endpoint signs show roots " +
                           "outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }
  return out;
}

}  // namespace

CharPolyEval eval_charpoly(const RiiNormalForm& nf, double x) {
  return evaluate(RiiRecurrence{nf}, x);
}

CharPolyEval eval_charpoly(const BalancedMatrix& m, double x) {
  return evaluate(MatrixRecurrence{m}, x);
}

RootSearchResult real_roots(const RiiNormalForm& nf, double lo, double hi,
                            const RootSearchOptions& opts) {
  return find_roots(RiiRecurrence{nf}, lo, hi, opts);
}

RootSearchResult real_roots(const BalancedMatrix& m, double lo, double hi,
                            const RootSearchOptions& opts) {
  return find_roots(MatrixRecurrence{m}, lo, hi, opts);
}

std::vector<bool> sign_condition(const RiiNormalForm& nf, double s) {
  const auto ev = evaluate_scaled(RiiRecurrence{nf}, s, true);
  std::vector<bool> out(ev.signs.size());
  for (std::size_t k = 0; k < ev.signs.size(); ++k) {
    const int alternating = k % 2 == 0 ? 1 : -1;
    out[k] = alternating * ev.signs[k] > 0;
  }
  return out;
}

Window default_window(const TridiagonalPencil& p) {
  const auto& a = p.a();
  const auto& b = p.b();
  const std::size_t n = p.order();
  auto radius = [n](const TridiagonalMatrix& m, std::size_t i) {
    double r = 0.0;
    if (i > 0) r += std::abs(m.subdiag()[i - 1]);
    if (i + 1 < n) r += std::abs(m.superdiag()[i]);
    return r;
  };
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double den = std::abs(b.diag()[i]) - radius(b, i);
    if (!(den > 0.0)) {
      throw InvalidArgument("no default root window: row " + std::to_string(i) +
                            " of B is not diagonally dominant; pass --lo/--hi");
    }
    bound = std::max(bound, (std::abs(a.diag()[i]) + radius(a, i)) / den);
  }
  return {-bound - 1.0, bound + 1.0};
}

Window default_window(const TridiagonalMatrix& m) {
  const std::size_t n = m.order();
  double lo = m.diag()[0], hi = m.diag()[0];
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(m.subdiag()[i - 1]);
    if (i + 1 < n) r += std::abs(m.superdiag()[i]);
    lo = std::min(lo, m.diag()[i] - r);
    hi = std::max(hi, m.diag()[i] + r);
  }
  return {lo - 1.0, hi + 1.0};
}

}  // namespace rii
