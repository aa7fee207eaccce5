#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rii/tridiagonal.hpp"

namespace rii {

/// Shifted LR factors of B^{(t)} - s I = L R, L unit lower bidiagonal with
/// subdiagonal e_1..e_{N-1}, R upper bidiagonal with diagonal q and unit
/// superdiagonal. e[0] = e[N] = 0.
struct QdState {
  std::size_t t = 0;
  std::vector<double> q;
  std::vector<double> e;
  std::vector<double> d;  // sweep values of the step that produced the state
  double s_curr = 0.0;
  std::optional<double> s_prev;

  std::size_t order() const noexcept { return q.size(); }
};

/// Throws Breakdown when a pivot q_{n-1} vanishes.
QdState init_qd(const BalancedMatrix& m, double s0);

/// One dqds sweep to shift s_next.
QdState dqds_step(const QdState& st, double s_next);

/// u_n = q_n + e_n + s and w_n = q_{n-1} e_n.
BalancedMatrix reconstruct_balanced(const QdState& st);

struct QdConfig {
  double shift = 0.0;
  double tol = 1e-14;  // on |e_n|
  std::size_t max_iter = 1'000'000;
  bool trace = false;
  std::size_t trace_stride = 1;
};

struct QdTraceRecord {
  std::size_t t = 0;
  std::vector<double> q;
  std::vector<double> e;
};

struct QdReport {
  std::vector<double> eigenvalues;  // q_n + s
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<std::string> breakdown;
  std::vector<QdTraceRecord> trace;
  bool descending = false;
  bool positive = true;  // q and d stayed > 0 and interior e >= 0 (e may underflow to +0)
  std::optional<QdState> final_state;
};

QdReport dqds_solve(const TridiagonalMatrix& b, const QdConfig& cfg);

}  // namespace rii
