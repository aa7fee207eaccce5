#include "rii/dqds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rii/errors.hpp"

namespace rii {

namespace {

bool is_zero(double x) { return std::abs(x) < kTinyDivisor; }

// A converged e_n keeps shrinking geometrically and eventually underflows to
// +0, so e only has to be nonnegative.
bool all_positive(const QdState& st) {
  const std::size_t n = st.order();
  for (std::size_t k = 0; k < n; ++k) {
    if (!(st.q[k] > 0.0)) return false;
    if (k > 0 && !(st.e[k] >= 0.0)) return false;
  }
  return std::all_of(st.d.begin(), st.d.end(), [](double x) { return x > 0.0; });
}

bool converged(const QdState& st, double tol) {
  for (std::size_t k = 1; k < st.order(); ++k) {
    if (!(std::abs(st.e[k]) < tol)) return false;
  }
  return true;
}

}  // namespace

QdState init_qd(const BalancedMatrix& m, double s0) {
  const std::size_t n = m.order();
  if (n == 0 || m.w.size() != n - 1) throw InvalidArgument("balanced matrix has inconsistent lengths");
  QdState st;
  st.s_curr = s0;
  st.q.assign(n, 0.0);
  st.e.assign(n + 1, 0.0);
  st.q[0] = m.u[0] - s0;
  for (std::size_t k = 1; k < n; ++k) {
    if (is_zero(st.q[k - 1])) throw Breakdown("q", k - 1);
    st.e[k] = m.w[k - 1] / st.q[k - 1];
    st.q[k] = m.u[k] - s0 - st.e[k];
  }
  return st;
}

QdState dqds_step(const QdState& st, double s_next) {
  const std::size_t n = st.order();
  if (n == 0 || st.e.size() != n + 1) throw InvalidArgument("qd state has inconsistent lengths");
  const double delta = s_next - st.s_curr;
  QdState out;
  out.t = st.t + 1;
  out.s_prev = st.s_curr;
  out.s_curr = s_next;
  out.q.assign(n, 0.0);
  out.e.assign(n + 1, 0.0);
  out.d.assign(n, 0.0);
  out.d[0] = st.q[0] - delta;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      if (is_zero(out.q[k - 1])) throw Breakdown("q'", k - 1);
      const double ratio = st.q[k] / out.q[k - 1];
      out.d[k] = out.d[k - 1] * ratio - delta;
      out.e[k] = st.e[k] * ratio;
    }
    out.q[k] = st.e[k + 1] + out.d[k];
  }
  return out;
}

BalancedMatrix reconstruct_balanced(const QdState& st) {
  const std::size_t n = st.order();
  BalancedMatrix m;
  m.u.resize(n);
  m.w.resize(n - 1);
  for (std::size_t k = 0; k < n; ++k) m.u[k] = st.q[k] + st.e[k] + st.s_curr;
  for (std::size_t k = 1; k < n; ++k) m.w[k - 1] = st.q[k - 1] * st.e[k];
  return m;
}

QdReport dqds_solve(const TridiagonalMatrix& b, const QdConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (cfg.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (cfg.trace_stride < 1) throw InvalidArgument("trace stride must be at least 1");
  if (!std::isfinite(cfg.shift)) throw InvalidArgument("shift must be finite");

  QdReport report;
  QdState st;
  try {
    st = init_qd(balance(b), cfg.shift);
  } catch (const Breakdown& e) {
    report.breakdown = e.what();
    report.positive = false;
    return report;
  }
  report.positive = all_positive(st);
  auto record = [&] { report.trace.push_back({st.t, st.q, st.e}); };
  if (cfg.trace) record();

  while (!converged(st, cfg.tol) && st.t < cfg.max_iter) {
    try {
      st = dqds_step(st, cfg.shift);
    } catch (const Breakdown& e) {
      report.breakdown = e.what();
      report.positive = false;
      break;
    }
    report.positive = report.positive && all_positive(st);
    if (cfg.trace && st.t % cfg.trace_stride == 0) record();
  }
  if (cfg.trace && report.trace.back().t != st.t) record();

  report.converged = !report.breakdown && converged(st, cfg.tol);
  report.iterations = st.t;
  report.eigenvalues.resize(st.order());
  for (std::size_t k = 0; k < st.order(); ++k) report.eigenvalues[k] = st.q[k] + st.s_curr;
  report.descending = std::adjacent_find(report.eigenvalues.begin(), report.eigenvalues.end(),
                                         std::less_equal<>()) == report.eigenvalues.end();
  report.final_state = std::move(st);
  return report;
}

}  // namespace rii
