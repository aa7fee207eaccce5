#include "rii/chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "rii/charpoly.hpp"
#include "rii/errors.hpp"

namespace rii {

namespace {

bool is_zero(double x) { return std::abs(x) < kTinyDivisor; }

void require_admissible_shift(double s, std::span<const double> kappas, std::size_t offset) {
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (is_zero(s - kappas[i])) throw InvalidShift(s, offset + i);
  }
}

void require_valid_state(const ChainState& st) {
  const std::size_t n = st.order();
  if (n == 0 || st.e.size() != n + 1 || st.kappa_window.size() != n ||
      st.lambda.size() != n - 1) {
    throw InvalidArgument("chain state has inconsistent lengths");
  }
}

std::vector<double> slide_window(const ChainState& st, double kappa_new) {
  std::vector<double> next(st.kappa_window.begin() + 1, st.kappa_window.end());
  next.push_back(kappa_new);
  return next;
}

// e'_n for n = 1..N-1 from the old state and the new q'.
std::vector<double> evolve_e(const ChainState& st, const std::vector<double>& qn) {
  const std::size_t n = st.order();
  const auto& q = st.q;
  const auto& e = st.e;
  std::vector<double> en(n + 1, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    en[k] = e[k] * q[k] / qn[k - 1] * (1.0 + qn[k - 1]) / (1.0 + qn[k]) * (1.0 + e[k + 1]) /
            (1.0 + e[k]);
  }
  return en;
}

void check_old_e(const ChainState& st) {
  for (std::size_t k = 1; k < st.order(); ++k) {
    if (is_zero(1.0 + st.e[k])) throw Breakdown("1+e", k);
  }
}

ChainState commit(const ChainState& st, double s_next, std::vector<double> window,
                  std::vector<double> qn, std::vector<double> en, std::vector<double> d) {
  ChainState out;
  out.t = st.t + 1;
  out.q = std::move(qn);
  out.e = std::move(en);
  out.d = std::move(d);
  out.s_prev = st.s_curr;
  out.s_curr = s_next;
  out.kappa_window = std::move(window);
  out.lambda = st.lambda;
  return out;
}

}  // namespace

ChainState init_state(const RiiNormalForm& nf, double s0, double kappa_last) {
  const std::size_t n = nf.order();
  require_admissible_shift(s0, nf.kappa(), 0);
  if (is_zero(s0 - kappa_last)) throw InvalidShift(s0, n - 1);

  ChainState st;
  st.s_curr = s0;
  st.kappa_window.assign(nf.kappa().begin(), nf.kappa().end());
  st.kappa_window.push_back(kappa_last);
  st.lambda.assign(nf.lambda().begin(), nf.lambda().end());
  st.q.assign(n, 0.0);
  st.e.assign(n + 1, 0.0);

  // e_tilde_n = w_n / q_{n-1}, e_tilde_0 = 0
  std::vector<double> et(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double num = nf.v()[k] - s0 * (1.0 + nf.w_at(k));
    if (k > 0) num -= (s0 - nf.lambda()[k - 1]) * et[k];
    st.q[k] = num / (s0 - st.kappa_window[k]);
    if (is_zero(1.0 + st.q[k])) throw Breakdown("1+q", k);
    if (k + 1 < n) {
      if (is_zero(st.q[k])) throw Breakdown("q", k);
      et[k + 1] = nf.w()[k] / st.q[k];
    }
  }
  for (std::size_t k = 1; k < n; ++k) st.e[k] = et[k] * (1.0 + st.q[k - 1]) / (1.0 + st.q[k]);
  return st;
}

ChainState step_subtraction_free(const ChainState& st, double s_next, double kappa_new) {
  require_valid_state(st);
  const std::size_t n = st.order();
  auto window = slide_window(st, kappa_new);
  require_admissible_shift(s_next, window, st.t + 1);
  check_old_e(st);

  const double s = st.s_curr;
  const double ds = s_next - s;
  const auto& q = st.q;
  const auto& e = st.e;
  std::vector<double> qn(n), d(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0) {
      d[0] = (s - st.kappa_window[0]) * q[0] - ds;
    } else {
      if (is_zero(qn[k - 1])) throw Breakdown("q'", k - 1);
      d[k] = d[k - 1] * q[k] / qn[k - 1] - ds * (1.0 + q[k]);
    }
    const double coupling = k + 1 < n ? (s_next - st.lambda[k]) * e[k + 1] : 0.0;
    qn[k] = (coupling + d[k] * (1.0 + e[k + 1])) / (s_next - window[k]);
    if (is_zero(1.0 + qn[k])) throw Breakdown("1+q'", k);
  }
  auto en = evolve_e(st, qn);
  return commit(st, s_next, std::move(window), std::move(qn), std::move(en), std::move(d));
}

ChainState step_general(const ChainState& st, double s_next, double kappa_new) {
  require_valid_state(st);
  const std::size_t n = st.order();
  auto window = slide_window(st, kappa_new);
  require_admissible_shift(s_next, window, st.t + 1);
  check_old_e(st);

  const double s = st.s_curr;
  const auto& q = st.q;
  const auto& e = st.e;
  // w^{(t+1)}_n from the right-hand side of the w equation
  std::vector<double> wt(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) wt[k] = q[k] * e[k] * (1.0 + e[k + 1]) / (1.0 + e[k]);

  std::vector<double> qn(n);
  for (std::size_t k = 0; k < n; ++k) {
    double val = (s_next - st.kappa_window[k]) * q[k] * (1.0 + e[k + 1]) / (1.0 + e[k]);
    if (k > 0) {
      if (is_zero(qn[k - 1])) throw Breakdown("q'", k - 1);
      val -= (s_next - st.lambda[k - 1]) * wt[k] / qn[k - 1];
    }
    if (k + 1 < n) val += (s_next - st.lambda[k]) * e[k + 1];
    val -= (s_next - s) * (1.0 + q[k]) * (1.0 + e[k + 1]);
    qn[k] = val / (s_next - window[k]);
    if (is_zero(1.0 + qn[k])) throw Breakdown("1+q'", k);
  }
  auto en = evolve_e(st, qn);
  return commit(st, s_next, std::move(window), std::move(qn), std::move(en), {});
}

PencilEntries reconstruct_vw(const ChainState& st) {
  require_valid_state(st);
  const std::size_t n = st.order();
  const auto& q = st.q;
  const auto& e = st.e;
  const double s = st.s_curr;
  PencilEntries out;
  out.v.resize(n);
  out.w.resize(n - 1);
  for (std::size_t k = 1; k < n; ++k) out.w[k - 1] = q[k - 1] * e[k] * (1.0 + q[k]) / (1.0 + q[k - 1]);
  for (std::size_t k = 0; k < n; ++k) {
    double v = -st.kappa_window[k] * q[k] + s * (1.0 + q[k]) * (1.0 + e[k]);
    if (k > 0) v -= st.lambda[k - 1] * e[k] * (1.0 + q[k]) / (1.0 + q[k - 1]);
    out.v[k] = v;
  }
  return out;
}

RiiNormalForm current_normal_form(const ChainState& st) {
  auto vw = reconstruct_vw(st);
  std::vector<double> kappa(st.kappa_window.begin(), st.kappa_window.end() - 1);
  return RiiNormalForm(std::move(vw.v), std::move(vw.w), std::move(kappa), st.lambda);
}

std::vector<double> eigenvalue_estimates(const ChainState& st) {
  std::vector<double> out(st.order());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (st.s_curr - st.kappa_window[k]) * st.q[k] + st.s_curr;
  }
  return out;
}

bool check_convergence(const ChainState& st, double tol) {
  const std::size_t n = st.order();
  const auto& q = st.q;
  const auto& e = st.e;
  for (std::size_t k = 1; k < n; ++k) {
    const double w = q[k - 1] * e[k] * (1.0 + q[k]) / (1.0 + q[k - 1]);
    if (!(std::abs(w) < tol) || !(std::abs(st.lambda[k - 1] * w) < tol)) return false;
  }
  return true;
}

PositivityReport check_positivity_preconditions(const RiiNormalForm& nf, double kappa_last,
                                                double s, double s_next, double min_eig) {
  PositivityReport r;
  r.w_positive = std::all_of(nf.w().begin(), nf.w().end(), [](double w) { return w > 0.0; });
  const auto cur = sign_condition(nf, s);
  const auto nxt = sign_condition(nf, s_next);
  r.sign_current = std::all_of(cur.begin(), cur.end(), [](bool b) { return b; });
  r.sign_next = std::all_of(nxt.begin(), nxt.end(), [](bool b) { return b; });
  r.shift_above_parameters =
      s > kappa_last &&
      std::all_of(nf.kappa().begin(), nf.kappa().end(), [s](double k) { return s > k; }) &&
      std::all_of(nf.lambda().begin(), nf.lambda().end(), [s](double l) { return s > l; });
  r.shift_below_min_eig = s < min_eig;
  return r;
}

namespace {

double smallest_eigenvalue(const TridiagonalPencil& p, const RiiNormalForm& nf) {
  const auto win = default_window(p);
  RootSearchOptions opts;
  opts.tol = 1e-9;
  const auto found = real_roots(nf, win.lo, win.hi, opts);
  if (found.roots.empty()) throw Error("automatic shift: no real generalized eigenvalue found");
  return found.roots.front();
}

class KappaStream {
 public:
  explicit KappaStream(const KappaPolicy& policy) : policy_(policy) {
    if (const auto* seq = std::get_if<KappaSequence>(&policy_); seq && seq->values.empty()) {
      throw InvalidArgument("kappa sequence must not be empty");
    }
  }

  // kappa_{N-1+i}
  double at(std::size_t i) const {
    if (const auto* fixed = std::get_if<FixedKappa>(&policy_)) return fixed->value;
    const auto& vals = std::get<KappaSequence>(policy_).values;
    return vals[std::min(i, vals.size() - 1)];
  }

  std::span<const double> distinct_values() const {
    if (const auto* fixed = std::get_if<FixedKappa>(&policy_)) return {&fixed->value, 1};
    return std::get<KappaSequence>(policy_).values;
  }

 private:
  KappaPolicy policy_;
};

TraceRecord make_record(const ChainState& st) {
  auto vw = reconstruct_vw(st);
  return TraceRecord{st.t, st.q, st.e, std::move(vw.v), std::move(vw.w)};
}

}  // namespace

double resolve_shift(const TridiagonalPencil& p, const RiiNormalForm& nf,
                     const ShiftPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedShift>(&policy)) return fixed->value;
  const double margin = std::get<AutoLowerBoundShift>(policy).margin;
  const double x_min = smallest_eigenvalue(p, nf);
  return x_min - margin * std::max(1.0, std::abs(x_min));
}

SolveReport solve(const TridiagonalPencil& p, const SolveConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (cfg.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (cfg.trace_stride < 1) throw InvalidArgument("trace stride must be at least 1");

  const auto nf = to_rii_normal_form(p);
  const std::size_t n = nf.order();
  const double s = resolve_shift(p, nf, cfg.shift);
  if (!std::isfinite(s)) throw InvalidArgument("shift must be finite");
  const KappaStream kappas(
      cfg.kappa.value_or(KappaPolicy{FixedKappa{-1e4 * std::max(1.0, std::abs(s))}}));

  require_admissible_shift(s, nf.kappa(), 0);
  require_admissible_shift(s, kappas.distinct_values(), n - 1);

  SolveReport report;
  report.initial_shift = s;
  report.kappa_last = kappas.at(0);

  ChainState st;
  try {
    st = init_state(nf, s, kappas.at(0));
  } catch (const Breakdown& b) {
    report.breakdown = b.what();
    return report;
  }
  if (cfg.trace) report.trace.push_back(make_record(st));

  while (!check_convergence(st, cfg.tol) && st.t < cfg.max_iter) {
    try {
      const double kappa_new = kappas.at(st.t + 1);
      st = cfg.use_general_step ? step_general(st, s, kappa_new)
                                : step_subtraction_free(st, s, kappa_new);
    } catch (const Breakdown& b) {
      report.breakdown = b.what();
      break;
    }
    if (cfg.trace && st.t % cfg.trace_stride == 0) report.trace.push_back(make_record(st));
  }
  report.converged = !report.breakdown && check_convergence(st, cfg.tol);
  if (cfg.trace && report.trace.back().t != st.t) report.trace.push_back(make_record(st));

  report.iterations = st.t;
  report.eigenvalues = eigenvalue_estimates(st);
  report.descending = std::adjacent_find(report.eigenvalues.begin(), report.eigenvalues.end(),
                                         std::less_equal<>()) == report.eigenvalues.end();
  report.final_state = std::move(st);
  return report;
}

}  // namespace rii
