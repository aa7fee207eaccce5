#include "rii/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rii/chain.hpp"
#include "rii/closed_form.hpp"
#include "rii/dqds.hpp"
#include "rii/errors.hpp"

namespace rii {

namespace {

double rel_diff(double got, double want) {
  const double diff = std::abs(got - want);
  return want == 0.0 ? diff : diff / std::abs(want);
}

class RowBuilder {
 public:
  RowBuilder(std::string name, double tol) { row_.name = std::move(name), row_.tolerance = tol; }

  void add(double residual) {
    ++row_.samples;
    if (!(residual <= row_.max_residual)) row_.max_residual = residual;  // NaN sticks
  }

  VerifyRow finish() {
    row_.pass = row_.samples > 0 && row_.max_residual <= row_.tolerance;
    return row_;
  }

 private:
  VerifyRow row_;
};

VerifyRow skipped(std::string name, double tol, std::string why) {
  VerifyRow row;
  row.name = std::move(name);
  row.tolerance = tol;
  row.note = std::move(why);
  return row;
}

// |lhs - (a - c b)| / (|lhs| + |a| + |c b|)
double identity_residual(double lhs, double a, double c, double b) {
  const double scale = std::abs(lhs) + std::abs(a) + std::abs(c * b);
  const double diff = std::abs(lhs - (a - c * b));
  return scale == 0.0 ? diff : diff / scale;
}

void check_rii(const TridiagonalPencil& p, const VerifyOptions& opts, VerifyReport& report) {
  const auto nf = to_rii_normal_form(p);
  const std::size_t n = nf.order();
  const std::size_t steps = opts.steps;
  const double s = opts.shift ? *opts.shift : resolve_shift(p, nf, AutoLowerBoundShift{});
  report.shift = s;

  const Window win = opts.window ? *opts.window : default_window(p);
  const auto found = real_roots(nf, win.lo, win.hi);
  if (!found.complete) {
    throw Error("verify needs N simple real eigenvalues; found " +
                std::to_string(found.roots.size()) + " of " + std::to_string(n));
  }
  auto roots = found.roots;
  std::reverse(roots.begin(), roots.end());

  const std::vector<double> shifts(steps + 3, s);
  const std::vector<double> kappa_stream(steps + n + 4, opts.kappa);
  const auto sd = make_spectral_data(nf, roots, shifts, kappa_stream);

  RowBuilder rq("closed_form_q", opts.tol.ratio);
  RowBuilder re("closed_form_e", opts.tol.ratio);
  RowBuilder rd("closed_form_d", opts.tol.ratio);
  auto st = init_state(nf, s, opts.kappa);
  for (std::size_t t = 0;; ++t) {
    for (std::size_t k = 0; k < n; ++k) {
      rq.add(rel_diff(closed_form_q(sd, k, t), st.q[k]));
      if (k > 0) re.add(rel_diff(closed_form_e(sd, k, t), st.e[k]));
      if (t > 0) rd.add(rel_diff(closed_form_d(sd, k, t), st.d[k]));
    }
    if (t == steps) break;
    st = step_subtraction_free(st, s, opts.kappa);
  }
  report.rows.push_back(rq.finish());
  report.rows.push_back(n > 1 ? re.finish()
                              : skipped("closed_form_e", opts.tol.ratio, "N = 1 has no e"));
  report.rows.push_back(steps > 0 ? rd.finish()
                                  : skipped("closed_form_d", opts.tol.ratio, "no steps taken"));

  RowBuilder rh("h_invariance", opts.tol.identity);
  const auto sd_scaled = make_spectral_data(nf, roots, shifts, kappa_stream, 7.3);
  for (std::size_t k = 0; k < n; ++k) {
    rh.add(rel_diff(closed_form_q(sd_scaled, k, steps), closed_form_q(sd, k, steps)));
    if (k > 0) rh.add(rel_diff(closed_form_e(sd_scaled, k, steps), closed_form_e(sd, k, steps)));
  }
  report.rows.push_back(rh.finish());

  RowBuilder rk("moment_kappa", opts.tol.identity);
  RowBuilder rl("moment_lambda", opts.tol.identity);
  RowBuilder rt("moment_time", opts.tol.identity);
  for (std::size_t t = 0; t <= steps; ++t) {
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t l = 0; l <= n; ++l) {
        for (std::size_t m = 0; m <= 2 * n; ++m) {
          const double mu = rii_moment(sd, k, l, t, m);
          const double up1 = rii_moment(sd, k + 1, l, t, m + 1);
          const double up0 = rii_moment(sd, k + 1, l, t, m);
          rk.add(identity_residual(mu, up1, sd.kappa[t + k], up0));
          rt.add(identity_residual(rii_moment(sd, k, l, t + 1, m), up1, sd.shifts[t], up0));
          if (l + 1 <= sd.lambda.size()) {
            rl.add(identity_residual(mu, rii_moment(sd, k, l + 1, t, m + 1), sd.lambda[l],
                                     rii_moment(sd, k, l + 1, t, m)));
          }
        }
      }
    }
  }
  report.rows.push_back(rk.finish());
  report.rows.push_back(n > 1 ? rl.finish()
                              : skipped("moment_lambda", opts.tol.identity, "N = 1 has no lambda"));
  report.rows.push_back(rt.finish());

  RowBuilder rb("bilinear", opts.tol.bilinear);
  for (std::size_t t = 0; t <= steps; ++t) {
    for (std::size_t k = 1; k <= n; ++k) {
      // lambda_l must exist for the l-shift relation behind the identity
      for (std::size_t l = 1; l < n; ++l) {
        for (long o = 1; o < static_cast<long>(n); ++o) {
          const auto tau = [&](std::size_t kk, std::size_t ll, long oo) {
            return rii_tau_scaled(sd, kk, ll, t, oo, opts.bilinear_method);
          };
          const ScaledReal a = tau(k - 1, l - 1, o) * tau(k, l, o);
          const ScaledReal b = tau(k - 1, l, o) * tau(k, l - 1, o);
          const ScaledReal c = tau(k - 1, l - 1, o - 1) * tau(k, l, o + 1);
          long top = std::numeric_limits<long>::min();
          for (const auto& x : {a, b, c}) {
            if (x.m != 0.0) top = std::max(top, x.e);
          }
          if (top == std::numeric_limits<long>::min()) {
            rb.add(0.0);
            continue;
          }
          const ScaledReal scale{0.5, top + 1};  // 2^top
          const double ra = to_double(a / scale), rbv = to_double(b / scale);
          const double rc = to_double(c / scale);
          const double big = std::max({std::abs(ra), std::abs(rbv), std::abs(rc)});
          rb.add(big == 0.0 ? 0.0 : std::abs(ra - rbv - rc) / big);
        }
      }
    }
  }
  report.rows.push_back(n > 1 ? rb.finish()
                              : skipped("bilinear", opts.tol.bilinear, "needs N >= 2"));
}

void check_toda(const TridiagonalPencil& p, const VerifyOptions& opts, VerifyReport& report) {
  const double tol = opts.tol.toda;
  const auto bal = balance(p.b());
  const std::size_t n = bal.order();
  const auto skip_all = [&](const std::string& why) {
    for (const char* name : {"toda_q", "toda_e", "toda_d", "toda_weights_positive"}) {
      report.rows.push_back(skipped(name, tol, why));
    }
  };
  if (std::any_of(bal.w.begin(), bal.w.end(), [](double w) { return !(w > 0.0); })) {
    skip_all("B is not symmetrizable with positive weights");
    return;
  }
  const Window win = default_window(p.b());
  const auto found = real_roots(bal, win.lo, win.hi);
  if (!found.complete) {
    skip_all("real_roots did not isolate all eigenvalues of B");
    return;
  }
  const double s = opts.toda_shift ? *opts.toda_shift : found.roots.front() - 0.5;
  auto roots = found.roots;
  std::reverse(roots.begin(), roots.end());

  TodaSpectralData sd;
  sd.weights = toda_quadrature_weights(bal, roots);
  sd.roots = roots;
  sd.shifts.assign(opts.steps + 3, s);

  RowBuilder rw("toda_weights_positive", 0.0);
  for (double c : sd.weights) rw.add(c > 0.0 ? 0.0 : 1.0);
  RowBuilder rq("toda_q", tol);
  RowBuilder re("toda_e", tol);
  RowBuilder rd("toda_d", tol);
  auto st = init_qd(bal, s);
  for (std::size_t t = 0;; ++t) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto qe = toda_closed_form(sd, k, t);
      rq.add(rel_diff(qe.q, st.q[k]));
      if (k > 0) re.add(rel_diff(qe.e, st.e[k]));
      if (t > 0) rd.add(rel_diff(toda_closed_form_d(sd, k, t), st.d[k]));
    }
    if (t == opts.steps) break;
    st = dqds_step(st, s);
  }
  report.rows.push_back(rq.finish());
  report.rows.push_back(n > 1 ? re.finish() : skipped("toda_e", tol, "N = 1 has no e"));
  report.rows.push_back(opts.steps > 0 ? rd.finish() : skipped("toda_d", tol, "no steps taken"));
  report.rows.push_back(rw.finish());
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const VerifyRow& r) { return r.pass || !r.note.empty(); });
}

VerifyReport verify_closed_form(const TridiagonalPencil& p, const VerifyOptions& opts) {
  if (p.order() > kMaxVerifyOrder) {
    throw InvalidArgument("verify supports N <= " + std::to_string(kMaxVerifyOrder) + ", got " +
                          std::to_string(p.order()));
  }
  VerifyReport report;
  check_rii(p, opts, report);
  if (opts.toda) check_toda(p, opts, report);
  return report;
}

}  // namespace rii
