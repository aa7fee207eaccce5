#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rii/charpoly.hpp"
#include "rii/closed_form.hpp"
#include "rii/tridiagonal.hpp"

namespace rii {

inline constexpr std::size_t kMaxVerifyOrder = 10;

struct VerifyTolerances {
  double ratio = 1e-8;      // closed-form q, e, d against the iteration
  double toda = 1e-9;       // closed-form Toda q, e, d against dqds
  double identity = 1e-12;  // moment relations, H invariance
  double bilinear = 1e-9;   // scaled by the largest of the three products
};

struct VerifyOptions {
  std::optional<double> shift;  // defaults to the automatic lower-bound shift
  double kappa = -1e4;          // kappa_{N-1}, kappa_N, ...
  std::size_t steps = 5;
  std::optional<Window> window;  // root window; default_window(p) otherwise
  bool toda = true;
  std::optional<double> toda_shift;  // defaults to min eig(B) - 0.5
  TauMethod bilinear_method = TauMethod::Expanded;
  VerifyTolerances tol;
};

struct VerifyRow {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  bool pass = false;
  std::string note;  // set when the row was skipped
};

struct VerifyReport {
  double shift = 0.0;
  std::vector<VerifyRow> rows;

  bool all_pass() const;
};

/// Iterates the chain for opts.steps steps at a fixed shift and compares it
/// with the determinant solution built from the t = 0 spectrum, then checks
/// the moment relations and the bilinear identity. With opts.toda the same is
/// done for dqds on B. Requires N <= kMaxVerifyOrder.
VerifyReport verify_closed_form(const TridiagonalPencil& p, const VerifyOptions& opts);

}  // namespace rii
