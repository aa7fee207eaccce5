#include "rii/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

#include "rii/charpoly.hpp"
#include "rii/errors.hpp"

namespace rii {

ScaledReal scaled(double x) {
  int ex = 0;
  const double m = std::frexp(x, &ex);
  return m == 0.0 ? ScaledReal{} : ScaledReal{m, ex};
}

ScaledReal operator*(ScaledReal a, ScaledReal b) {
  ScaledReal r = scaled(a.m * b.m);
  if (r.m != 0.0) r.e += a.e + b.e;
  return r;
}

ScaledReal operator/(ScaledReal a, ScaledReal b) {
  ScaledReal r = scaled(a.m / b.m);
  if (r.m != 0.0 && std::isfinite(r.m)) r.e += a.e - b.e;
  return r;
}

ScaledReal operator+(ScaledReal a, ScaledReal b) {
  if (a.m == 0.0) return b;
  if (b.m == 0.0) return a;
  if (a.e < b.e) std::swap(a, b);
  const long gap = a.e - b.e;
  if (gap > 1100) return a;
  ScaledReal r = scaled(a.m + std::ldexp(b.m, static_cast<int>(-gap)));
  if (r.m != 0.0) r.e += a.e;
  return r;
}

ScaledReal operator-(ScaledReal a, ScaledReal b) { return a + ScaledReal{-b.m, b.e}; }

double to_double(ScaledReal x) {
  if (x.e > std::numeric_limits<int>::max()) return std::copysign(HUGE_VAL, x.m);
  if (x.e < std::numeric_limits<int>::min()) return 0.0 * x.m;
  return std::ldexp(x.m, static_cast<int>(x.e));
}

namespace {

double lu_det(std::vector<double> a, std::size_t n) {
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (a[piv * n + col] == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      det = -det;
    }
    const double p = a[col * n + col];
    det *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / p;
      if (f == 0.0) continue;
      for (std::size_t c = col + 1; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
    }
  }
  return det;
}

// The Hankel determinant is a Gram determinant of the monomials, so it is
// unchanged by translating the nodes and picks up 2^{k n(n-1)} when they are
// scaled by 2^k. Centering and scaling first keeps the moment matrix far
// better conditioned than the raw one.
ScaledReal hankel_lu(std::span<const double> x, std::span<const double> rho, std::size_t n) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double center = 0.5 * (*lo + *hi);
  int k = 0;
  if (*hi > *lo) std::frexp(0.5 * (*hi - *lo), &k);
  std::vector<double> mom(2 * n - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double y = std::ldexp(x[i] - center, -k);
    double p = rho[i];
    for (auto& m : mom) {
      m += p;
      p *= y;
    }
  }
  std::vector<double> h(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) h[r * n + c] = mom[r + c];
  }
  const long nn = static_cast<long>(n);
  return scaled(lu_det(std::move(h), n)) * ScaledReal{0.5, static_cast<long>(k) * nn * (nn - 1) + 1};
}

// Cauchy-Binet: sum over n-subsets r of prod rho_r * prod_{a<b} (x_b - x_a)^2.
ScaledReal hankel_expanded(std::span<const double> x, std::span<const double> rho, std::size_t n) {
  const std::size_t total = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  ScaledReal sum;
  for (;;) {
    ScaledReal term = scaled(1.0);
    for (std::size_t i : idx) term = term * scaled(rho[i]);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const double diff = x[idx[b]] - x[idx[a]];
        term = term * scaled(diff * diff);
      }
    }
    sum = sum + term;
    std::size_t pos = n;
    while (pos > 0 && idx[pos - 1] == total - n + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return sum;
}

void require_length(std::size_t have, std::size_t need, const char* what) {
  if (have < need) {
    throw InvalidArgument(std::string(what) + " stream too short: need " + std::to_string(need) +
                          ", have " + std::to_string(have));
  }
}

double shift_product(std::span<const double> shifts, std::size_t t, double x) {
  require_length(shifts.size(), t, "shift");
  double p = 1.0;
  for (std::size_t j = 0; j < t; ++j) p *= x - shifts[j];
  return p;
}

// tau of order < 0 is 0, of order 0 is 1, and of order > N is 0.
std::optional<double> trivial_order(long order, std::size_t n) {
  if (order < 0) return 0.0;
  if (order == 0) return 1.0;
  if (static_cast<std::size_t>(order) > n) return 0.0;
  return std::nullopt;
}

ScaledReal det_scaled(std::span<const double> nodes, std::span<const double> rho, long order,
                  TauMethod method) {
  if (nodes.size() != rho.size()) throw InvalidArgument("nodes and weights differ in length");
  if (const auto v = trivial_order(order, nodes.size())) return scaled(*v);
  const auto n = static_cast<std::size_t>(order);
  return method == TauMethod::Expanded ? hankel_expanded(nodes, rho, n)
                                       : hankel_lu(nodes, rho, n);
}

double checked_ratio(ScaledReal num, ScaledReal den, const char* what) {
  if (den.m == 0.0 || !std::isfinite(den.m)) {
    throw DegenerateTau(std::string("DegenerateTau: zero denominator in ") + what);
  }
  return to_double(num / den);
}

}  // namespace

std::vector<double> rii_quadrature_weights(const RiiNormalForm& nf, std::span<const double> roots,
                                           double h_scale) {
  const std::size_t n = nf.order();
  if (roots.size() != n) throw InvalidArgument("need exactly N roots");
  double h = h_scale;
  for (double w : nf.w()) h *= w;
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = roots[i];
    const auto ev = eval_charpoly(nf, x);
    double kl = 1.0;
    for (double k : nf.kappa()) kl *= x - k;
    for (double l : nf.lambda()) kl *= x - l;
    const double den = ev.values[n - 1] * ev.derivs[n];
    if (std::abs(den) < kTinyDivisor) throw DegenerateRoot(i);
    c[i] = h * kl / den;
  }
  return c;
}

SpectralData make_spectral_data(const RiiNormalForm& nf, std::vector<double> roots,
                                std::vector<double> shifts, std::span<const double> kappa_stream,
                                double h_scale) {
  SpectralData sd;
  sd.weights = rii_quadrature_weights(nf, roots, h_scale);
  sd.roots = std::move(roots);
  sd.shifts = std::move(shifts);
  sd.kappa.assign(nf.kappa().begin(), nf.kappa().end());
  sd.kappa.insert(sd.kappa.end(), kappa_stream.begin(), kappa_stream.end());
  sd.lambda.assign(nf.lambda().begin(), nf.lambda().end());
  return sd;
}

std::vector<double> rii_node_weights(const SpectralData& sd, std::size_t k, std::size_t l,
                                     std::size_t t) {
  const std::size_t n = sd.order();
  require_length(sd.kappa.size(), t + k, "kappa");
  const std::size_t nl = std::min(l, sd.lambda.size());
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sd.roots[i];
    double den = 1.0;
    for (std::size_t j = 0; j < t + k; ++j) den *= x - sd.kappa[j];
    for (std::size_t j = 0; j < nl; ++j) den *= x - sd.lambda[j];
    if (std::abs(den) < kTinyDivisor) throw PoleHit(i);
    rho[i] = sd.weights[i] * shift_product(sd.shifts, t, x) / den;
  }
  return rho;
}

double rii_moment(const SpectralData& sd, std::size_t k, std::size_t l, std::size_t t,
                  std::size_t m) {
  const auto rho = rii_node_weights(sd, k, l, t);
  double sum = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    sum += rho[i] * std::pow(sd.roots[i], static_cast<double>(m));
  }
  return sum;
}

double hankel_det(std::span<const double> nodes, std::span<const double> rho, long order,
                  TauMethod method) {
  return to_double(det_scaled(nodes, rho, order, method));
}

ScaledReal rii_tau_scaled(const SpectralData& sd, std::size_t k, std::size_t l, std::size_t t,
                      long order, TauMethod method) {
  if (const auto v = trivial_order(order, sd.order())) return scaled(*v);
  return det_scaled(sd.roots, rii_node_weights(sd, k, l, t), order, method);
}

ScaledReal rii_sigma_scaled(const SpectralData& sd, std::size_t k, std::size_t l, std::size_t t,
                        long order, TauMethod method) {
  if (t == 0) throw InvalidArgument("sigma needs t >= 1");
  if (const auto v = trivial_order(order, sd.order())) return scaled(*v);
  require_length(sd.shifts.size(), t + 1, "shift");
  auto rho = rii_node_weights(sd, k + 1, l, t - 1);
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] *= sd.roots[i] - sd.shifts[t];
  return det_scaled(sd.roots, rho, order, method);
}

double hankel_tau(const SpectralData& sd, std::size_t k, std::size_t l, std::size_t t, long order,
                  TauMethod method) {
  return to_double(rii_tau_scaled(sd, k, l, t, order, method));
}

double rii_sigma(const SpectralData& sd, std::size_t k, std::size_t l, std::size_t t, long order,
                 TauMethod method) {
  return to_double(rii_sigma_scaled(sd, k, l, t, order, method));
}

double closed_form_q(const SpectralData& sd, std::size_t n, std::size_t t, TauMethod method) {
  if (n >= sd.order()) throw InvalidArgument("chain index out of range");
  require_length(sd.shifts.size(), t + 1, "shift");
  require_length(sd.kappa.size(), t + n + 1, "kappa");
  const long o = static_cast<long>(n);
  const auto tau = [&](std::size_t k, std::size_t l, std::size_t tt, long order) {
    return rii_tau_scaled(sd, k, l, tt, order, method);
  };
  const ScaledReal num = tau(n, n, t, o) * tau(n, n + 1, t + 1, o + 1);
  const ScaledReal den = scaled(sd.shifts[t] - sd.kappa[t + n]) *
                     tau(n == 0 ? 0 : n - 1, n, t + 1, o) * tau(n + 1, n + 1, t, o + 1);
  return checked_ratio(num, den, "q");
}

double closed_form_e(const SpectralData& sd, std::size_t n, std::size_t t, TauMethod method) {
  if (n > sd.order()) throw InvalidArgument("chain index out of range");
  if (n == 0 || n == sd.order()) return 0.0;
  require_length(sd.shifts.size(), t + 1, "shift");
  require_length(sd.kappa.size(), t + n + 1, "kappa");
  const long o = static_cast<long>(n);
  const auto tau = [&](std::size_t k, std::size_t l, std::size_t tt, long order) {
    return rii_tau_scaled(sd, k, l, tt, order, method);
  };
  const ScaledReal num = scaled(sd.shifts[t] - sd.kappa[t + n]) * tau(n - 1, n - 1, t + 1, o - 1) *
                     tau(n + 1, n, t, o + 1);
  const ScaledReal den = tau(n, n - 1, t, o) * tau(n, n, t + 1, o);
  return checked_ratio(num, den, "e");
}

double closed_form_d(const SpectralData& sd, std::size_t n, std::size_t t, TauMethod method) {
  if (t == 0) throw InvalidArgument("d is defined for t >= 1");
  if (n >= sd.order()) throw InvalidArgument("chain index out of range");
  const long o = static_cast<long>(n);
  const auto tau = [&](std::size_t k, std::size_t l, std::size_t tt, long order) {
    return rii_tau_scaled(sd, k, l, tt, order, method);
  };
  const ScaledReal num = tau(n, n, t, o) * rii_sigma_scaled(sd, n, n + 1, t, o + 1, method);
  const ScaledReal den = tau(n + 1, n + 1, t - 1, o + 1) * tau(n == 0 ? 0 : n - 1, n, t + 1, o);
  return checked_ratio(num, den, "d");
}

std::vector<double> toda_quadrature_weights(const BalancedMatrix& m, std::span<const double> roots,
                                            double h_scale) {
  const std::size_t n = m.order();
  if (roots.size() != n) throw InvalidArgument("need exactly N roots");
  double h = h_scale;
  for (double w : m.w) h *= w;
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ev = eval_charpoly(m, roots[i]);
    const double den = ev.values[n - 1] * ev.derivs[n];
    if (std::abs(den) < kTinyDivisor) throw DegenerateRoot(i);
    c[i] = h / den;
  }
  return c;
}

namespace {

std::vector<double> toda_node_weights(const TodaSpectralData& sd, std::size_t t) {
  std::vector<double> rho(sd.order());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rho[i] = sd.weights[i] * shift_product(sd.shifts, t, sd.roots[i]);
  }
  return rho;
}

ScaledReal toda_tau_scaled(const TodaSpectralData& sd, std::size_t t, long order, TauMethod method) {
  if (const auto v = trivial_order(order, sd.order())) return scaled(*v);
  return det_scaled(sd.roots, toda_node_weights(sd, t), order, method);
}

ScaledReal toda_sigma_scaled(const TodaSpectralData& sd, std::size_t t, long order,
                         TauMethod method) {
  if (t == 0) throw InvalidArgument("sigma needs t >= 1");
  if (const auto v = trivial_order(order, sd.order())) return scaled(*v);
  require_length(sd.shifts.size(), t + 1, "shift");
  auto rho = toda_node_weights(sd, t - 1);
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] *= sd.roots[i] - sd.shifts[t];
  return det_scaled(sd.roots, rho, order, method);
}

}  // namespace

double toda_moment(const TodaSpectralData& sd, std::size_t t, std::size_t m) {
  const auto rho = toda_node_weights(sd, t);
  double sum = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    sum += rho[i] * std::pow(sd.roots[i], static_cast<double>(m));
  }
  return sum;
}

double toda_tau(const TodaSpectralData& sd, std::size_t t, long order, TauMethod method) {
  return to_double(toda_tau_scaled(sd, t, order, method));
}

double toda_sigma(const TodaSpectralData& sd, std::size_t t, long order, TauMethod method) {
  return to_double(toda_sigma_scaled(sd, t, order, method));
}

QePair toda_closed_form(const TodaSpectralData& sd, std::size_t n, std::size_t t,
                        TauMethod method) {
  if (n >= sd.order()) throw InvalidArgument("chain index out of range");
  const long o = static_cast<long>(n);
  const ScaledReal tn = toda_tau_scaled(sd, t, o, method);
  const ScaledReal tn1 = toda_tau_scaled(sd, t, o + 1, method);
  const ScaledReal un = toda_tau_scaled(sd, t + 1, o, method);
  const ScaledReal un1 = toda_tau_scaled(sd, t + 1, o + 1, method);
  QePair out;
  out.q = checked_ratio(tn * un1, tn1 * un, "q");
  out.e = n == 0 ? 0.0
                 : checked_ratio(tn1 * toda_tau_scaled(sd, t + 1, o - 1, method), tn * un, "e");
  return out;
}

double toda_closed_form_d(const TodaSpectralData& sd, std::size_t n, std::size_t t,
                          TauMethod method) {
  if (t == 0) throw InvalidArgument("d is defined for t >= 1");
  if (n >= sd.order()) throw InvalidArgument("chain index out of range");
  const long o = static_cast<long>(n);
  const ScaledReal num = toda_tau_scaled(sd, t, o, method) * toda_sigma_scaled(sd, t, o + 1, method);
  const ScaledReal den = toda_tau_scaled(sd, t - 1, o + 1, method) * toda_tau_scaled(sd, t + 1, o, method);
  return checked_ratio(num, den, "d");
}

}  // namespace rii
