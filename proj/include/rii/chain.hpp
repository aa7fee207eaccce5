#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rii/tridiagonal.hpp"

namespace rii {

/// Variables of the monic finite R_II chain at discrete time t.
///
/// e has N+1 entries with e[0] = e[N] = 0. kappa_window holds
/// kappa_t..kappa_{t+N-1}; lambda holds lambda_1..lambda_{N-1} and never
/// changes. d holds the auxiliary sweep values of the step that produced this
/// state and is empty at t = 0.
struct ChainState {
  std::size_t t = 0;
  std::vector<double> q;
  std::vector<double> e;
  std::vector<double> d;
  double s_curr = 0.0;
  std::optional<double> s_prev;
  std::vector<double> kappa_window;
  std::vector<double> lambda;

  std::size_t order() const noexcept { return q.size(); }
};

/// Current pencil entries A^{(t)}, B^{(t)}: v_0..v_{N-1} and w_1..w_{N-1}.
struct PencilEntries {
  std::vector<double> v;
  std::vector<double> w;
};

/// Decomposes the normal form into chain variables for shift s0; kappa_last
/// becomes kappa_{N-1}. Throws InvalidShift or Breakdown.
ChainState init_state(const RiiNormalForm& nf, double s0, double kappa_last);

/// One time step in subtraction-free form (the production path).
ChainState step_subtraction_free(const ChainState& st, double s_next, double kappa_new);

/// One time step through the direct recurrence; same transition as
/// step_subtraction_free up to rounding.
ChainState step_general(const ChainState& st, double s_next, double kappa_new);

/// v^{(t)}, w^{(t)} recovered from (q, e) at the current time.
PencilEntries reconstruct_vw(const ChainState& st);

/// Normal form of the current pencil (A^{(t)}, B^{(t)}). Its kappa is
/// kappa_t..kappa_{t+N-2}; pair it with kappa_window.back() as kappa_last.
RiiNormalForm current_normal_form(const ChainState& st);

/// (s - kappa_{t+n}) q_n + s for each index.
std::vector<double> eigenvalue_estimates(const ChainState& st);

/// |w_n| < tol and |lambda_n w_n| < tol for every n = 1..N-1.
bool check_convergence(const ChainState& st, double tol);

/// Which of the sufficient conditions for a cancellation-free sweep hold.
struct PositivityReport {
  bool w_positive = false;             // all w_n > 0
  bool sign_current = false;           // (-1)^n phi_n(s) > 0 for all n
  bool sign_next = false;              // (-1)^n phi_n(s_next) > 0 for all n
  bool shift_above_parameters = false; // s > kappa_n and s > lambda_n
  bool shift_below_min_eig = false;    // s < min_eig

  bool all_conditions() const noexcept {
    return w_positive && sign_current && sign_next && shift_above_parameters;
  }
};

PositivityReport check_positivity_preconditions(const RiiNormalForm& nf, double kappa_last,
                                                double s, double s_next, double min_eig);

struct FixedShift {
  double value;
};

/// s = x_min - margin * max(1, |x_min|) with x_min from the characteristic
/// polynomial oracle.
struct AutoLowerBoundShift {
  double margin = 1e-2;
};

using ShiftPolicy = std::variant<FixedShift, AutoLowerBoundShift>;

/// Every new kappa (kappa_{N-1}, kappa_N, ...) equals value.
struct FixedKappa {
  double value;
};

/// values[i] is kappa_{N-1+i}; the last value repeats once exhausted.
struct KappaSequence {
  std::vector<double> values;
};

using KappaPolicy = std::variant<FixedKappa, KappaSequence>;

struct SolveConfig {
  ShiftPolicy shift = FixedShift{0.0};
  /// Defaults to FixedKappa{-1e4 * max(1, |s0|)}.
  std::optional<KappaPolicy> kappa;
  double tol = 1e-20;
  std::size_t max_iter = 1'000'000;
  bool trace = false;
  std::size_t trace_stride = 1;
  bool use_general_step = false;
};

struct TraceRecord {
  std::size_t t = 0;
  std::vector<double> q;  // N
  std::vector<double> e;  // N+1
  std::vector<double> v;  // N
  std::vector<double> w;  // N-1
};

struct SolveReport {
  std::vector<double> eigenvalues;  // chain index order
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<std::string> breakdown;
  std::vector<TraceRecord> trace;
  bool descending = false;  // eigenvalues strictly decrease with the index
  double initial_shift = 0.0;
  double kappa_last = 0.0;
  std::optional<ChainState> final_state;
};

/// The automatic policy searches the default root window of p; nf must be
/// the normal form of p.
double resolve_shift(const TridiagonalPencil& p, const RiiNormalForm& nf,
                     const ShiftPolicy& policy);

/// Full driver: normal form, initialization, iteration until convergence or
/// max_iter. A Breakdown is reported with the last valid state, never
/// recovered from.
SolveReport solve(const TridiagonalPencil& p, const SolveConfig& cfg);

}  // namespace rii
