#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rii/chain.hpp"
#include "rii/charpoly.hpp"
#include "rii/tridiagonal.hpp"

using namespace rii;

namespace {

double rel(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("spectrum is invariant under the time evolution") {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 2 + rep % 7;
    const auto inst = testing::random_positive_instance(n, rng);
    const auto win = default_window(inst.pencil);
    const auto nf = to_rii_normal_form(inst.pencil);
    const auto r0 = real_roots(nf, win.lo, win.hi);
    REQUIRE(r0.complete);

    auto st = init_state(nf, inst.shift, inst.kappa_new);
    for (std::size_t t = 0; t <= 25; ++t) {
      if (t == 0 || t == 10 || t == 25) {
        const auto rt = real_roots(current_normal_form(st), win.lo, win.hi);
        REQUIRE(rt.complete);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(rt.roots[i] - r0.roots[i]) < 1e-8);
      }
      st = step_subtraction_free(st, inst.shift, inst.kappa_new);
    }
  }
}

TEST_CASE("step forms agree on random positive instances") {
  std::mt19937_64 rng(202);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = testing::random_positive_instance(6, rng);
    auto a = init_state(to_rii_normal_form(inst.pencil), inst.shift, inst.kappa_new);
    auto b = a;
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      a = step_subtraction_free(a, inst.shift, inst.kappa_new);
      b = step_general(b, inst.shift, inst.kappa_new);
      for (std::size_t k = 0; k < 6; ++k) worst = std::max(worst, rel(b.q[k], a.q[k]));
      for (std::size_t k = 1; k < 6; ++k) worst = std::max(worst, rel(b.e[k], a.e[k]));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("positivity holds while the sufficient conditions hold") {
  std::mt19937_64 rng(303);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 3 + rep % 6;
    const auto inst = testing::random_positive_instance(n, rng);
    auto st = init_state(to_rii_normal_form(inst.pencil), inst.shift, inst.kappa_new);
    for (int t = 0; t < 50; ++t) {
      const auto pre = check_positivity_preconditions(current_normal_form(st), st.kappa_window.back(),
                                                      inst.shift, inst.shift, inst.min_eig);
      REQUIRE(pre.all_conditions());
      st = step_subtraction_free(st, inst.shift, inst.kappa_new);
      for (double q : st.q) CHECK(q > 0.0);
      for (double d : st.d) CHECK(d > 0.0);
      for (std::size_t k = 1; k < n; ++k) CHECK(st.e[k] > 0.0);
    }
  }
}

TEST_CASE("estimates are fixed under any admissible step from a decoupled state") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rep % 5;
    ChainState st;
    st.s_curr = u(rng);
    for (std::size_t k = 0; k < n; ++k) {
      st.q.push_back(0.1 + u(rng));
      st.kappa_window.push_back(-1.0 - 10.0 * u(rng));
    }
    st.e.assign(n + 1, 0.0);
    st.lambda.assign(n - 1, -0.5);
    const auto est = eigenvalue_estimates(st);
    const auto next = step_subtraction_free(st, st.s_curr - 0.1 * u(rng), -20.0 * u(rng) - 1.0);
    const auto got = eigenvalue_estimates(next);
    for (std::size_t k = 0; k < n; ++k) CHECK(rel(got[k], est[k]) < 1e-15);
  }
}
