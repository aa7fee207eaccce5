#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rii/charpoly.hpp"
#include "rii/errors.hpp"
#include "rii/tridiagonal.hpp"

using namespace rii;

namespace {

TridiagonalPencil two_by_two() {
  return TridiagonalPencil(TridiagonalMatrix::symmetric({4, 4}, {2}),
                           TridiagonalMatrix::symmetric({2, 2}, {1}));
}

}  // namespace

TEST_CASE("matrix construction checks lengths and finiteness") {
  CHECK_THROWS_AS(TridiagonalMatrix({1, 2}, {1}, {}), InvalidArgument);
  CHECK_THROWS_AS(TridiagonalMatrix({1, 2}, {1, 2}, {1}), InvalidArgument);
  CHECK_THROWS_AS(TridiagonalMatrix::symmetric({1, NAN}, {1}), InvalidArgument);
  CHECK_THROWS_AS(TridiagonalMatrix::symmetric({1, 2}, {INFINITY}), InvalidArgument);
  CHECK_THROWS_AS(TridiagonalPencil(TridiagonalMatrix::symmetric({1, 2}, {1}),
                                    TridiagonalMatrix::symmetric({1}, {})),
                  InvalidArgument);
}

TEST_CASE("validate_pencil") {
  SUBCASE("order one") {
    CHECK_NOTHROW(validate_pencil(TridiagonalPencil(TridiagonalMatrix::symmetric({3}, {}),
                                                    TridiagonalMatrix::symmetric({2}, {}))));
  }
  SUBCASE("zero off-diagonal of B") {
    const TridiagonalPencil p(TridiagonalMatrix::symmetric({1, 1}, {1}),
                              TridiagonalMatrix({2, 2}, {0}, {1}));
    try {
      validate_pencil(p);
      FAIL("expected ZeroOffdiagonal");
    } catch (const ZeroOffdiagonal& e) {
      CHECK(e.index() == 0);
    }
  }
  SUBCASE("Krawtchouk test pencil") { CHECK_NOTHROW(validate_pencil(krawtchouk_test_pencil(5))); }
}

TEST_CASE("minor_ratio_sequence") {
  SUBCASE("hand 2x2") {
    const auto g = minor_ratio_sequence(TridiagonalMatrix::symmetric({2, 2}, {1}));
    REQUIRE(g.size() == 2);
    CHECK(g[0] == 2.0);
    CHECK(g[1] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(g[0] * g[1] == doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("K_5 + I") {
    const auto b = krawtchouk_matrix(5).shifted(1.0);
    const auto g = minor_ratio_sequence(b);
    CHECK(g[0] == 3.0);
    CHECK(g[1] == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    const auto minors = testing::leading_minors(b);
    double prod = 1.0;
    for (std::size_t k = 0; k < 5; ++k) {
      prod *= g[k];
      // dense determinant of the leading block as an independent check
      std::vector<long double> dense((k + 1) * (k + 1), 0.0L);
      for (std::size_t i = 0; i <= k; ++i) {
        dense[i * (k + 1) + i] = b.diag()[i];
        if (i < k) {
          dense[i * (k + 1) + i + 1] = b.superdiag()[i];
          dense[(i + 1) * (k + 1) + i] = b.subdiag()[i];
        }
      }
      const double det = static_cast<double>(testing::dense_det(dense, k + 1));
      CHECK(std::abs(prod - det) <= 1e-12 * std::abs(det));
      CHECK(std::abs(prod - minors[k]) <= 1e-12 * std::abs(minors[k]));
    }
  }
  SUBCASE("singular leading minor") {
    try {
      minor_ratio_sequence(TridiagonalMatrix::symmetric({1, 1}, {1}));
      FAIL("expected SingularLeadingMinor");
    } catch (const SingularLeadingMinor& e) {
      CHECK(e.index() == 1);
    }
  }
}

TEST_CASE("minor ratios telescope to the determinant recurrence") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rep % 19;
    std::vector<double> d(n), sup(n - 1), sub(n - 1);
    for (auto& x : d) x = 3.0 + u(rng);
    for (auto& x : sup) x = u(rng);
    for (auto& x : sub) x = u(rng);
    const TridiagonalMatrix b(d, sup, sub);
    const auto g = minor_ratio_sequence(b);
    const auto minors = testing::leading_minors(b);
    double prod = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      prod *= g[k];
      CHECK(std::abs(prod - minors[k]) <= 1e-12 * std::abs(minors[k]));
    }
  }
}

TEST_CASE("to_rii_normal_form") {
  SUBCASE("order one") {
    const auto nf = to_rii_normal_form(TridiagonalPencil(TridiagonalMatrix::symmetric({3}, {}),
                                                         TridiagonalMatrix::symmetric({2}, {})));
    CHECK(nf.order() == 1);
    CHECK(nf.v()[0] == 1.5);
    CHECK(nf.w().empty());
    CHECK(nf.kappa().empty());
    CHECK(nf.lambda().empty());
  }
  SUBCASE("hand 2x2") {
    const auto p = two_by_two();
    const auto nf = to_rii_normal_form(p);
    CHECK(nf.kappa()[0] == 2.0);
    CHECK(nf.lambda()[0] == 2.0);
    CHECK(nf.v()[0] == 2.0);
    CHECK(nf.v()[1] == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(nf.w()[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    // A = 2B here, so det(xB - A) = 3 (x - 2)^2; compare values, not roots
    const double det_b = 3.0;
    for (double x : {-1.0, 0.5, 2.0, 3.25}) {
      const double want = static_cast<double>(testing::pencil_det(p, x)) / det_b;
      CHECK(eval_charpoly(nf, x).values[2] == doctest::Approx(want).epsilon(1e-14));
    }
  }
  SUBCASE("Krawtchouk test pencil has roots (n+1)/n") {
    const auto nf = to_rii_normal_form(krawtchouk_test_pencil(5));
    for (int n = 1; n <= 5; ++n) {
      const double x = (n + 1.0) / n;
      const auto ev = eval_charpoly(nf, x);
      CHECK(std::abs(ev.values.back()) < 1e-12 * std::max(1.0, std::abs(ev.derivs.back())));
    }
  }
}

TEST_CASE("normal form preserves the spectrum of random pencils") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 1 + rep % 8;
    auto inst = testing::random_positive_instance(std::max<std::size_t>(n, 2), rng);
    const auto& p = inst.pencil;
    const auto win = default_window(p);
    const auto dense = testing::dense_pencil_roots(p, win.lo, win.hi, 40000);
    const auto found = real_roots(to_rii_normal_form(p), win.lo, win.hi);
    REQUIRE(found.complete);
    REQUIRE(dense.size() == found.roots.size());
    for (std::size_t i = 0; i < dense.size(); ++i) CHECK(std::abs(found.roots[i] - dense[i]) < 1e-10);
  }
}

TEST_CASE("krawtchouk_matrix") {
  SUBCASE("N = 5") {
    const auto k = krawtchouk_matrix(5);
    for (double d : k.diag()) CHECK(d == 2.0);
    const double want[] = {1.0, std::sqrt(1.5), std::sqrt(1.5), 1.0};
    for (int i = 0; i < 4; ++i) CHECK(k.superdiag()[i] == doctest::Approx(want[i]).epsilon(1e-15));
  }
  SUBCASE("N = 2") {
    const auto k = krawtchouk_matrix(2);
    CHECK(k.diag()[0] == 0.5);
    CHECK(k.diag()[1] == 0.5);
    CHECK(k.superdiag()[0] == 0.5);
  }
  SUBCASE("exact symmetry") {
    for (std::size_t n : {2u, 7u, 64u}) {
      const auto k = krawtchouk_matrix(n);
      for (std::size_t i = 0; i + 1 < n; ++i) CHECK(k.superdiag()[i] == k.subdiag()[i]);
    }
  }
  SUBCASE("N = 16 eigenvalues") {
    const auto m = krawtchouk_matrix(16);
    const auto win = default_window(m);
    const auto r = real_roots(balance(m), win.lo, win.hi);
    REQUIRE(r.complete);
    for (int i = 0; i < 16; ++i) CHECK(std::abs(r.roots[i] - i) < 1e-10);
  }
}

TEST_CASE("krawtchouk_test_pencil") {
  const auto p = krawtchouk_test_pencil(5);
  for (double d : p.a().diag()) CHECK(d == 4.0);
  for (double d : p.b().diag()) CHECK(d == 3.0);
  const auto ev = krawtchouk_pencil_eigenvalues(5);
  const std::vector<double> want{2.0, 1.5, 4.0 / 3.0, 1.25, 1.2};
  CHECK(testing::max_rel_diff(ev, want) < 1e-15);
  CHECK(krawtchouk_pencil_eigenvalues(2) == std::vector<double>{2.0, 1.5});
  CHECK(krawtchouk_pencil_eigenvalues(512).back() == doctest::Approx(513.0 / 512.0).epsilon(1e-15));
  const auto found = real_roots(to_rii_normal_form(krawtchouk_test_pencil(2)), 1.0, 3.0);
  REQUIRE(found.complete);
  CHECK(found.roots[0] == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(found.roots[1] == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("balance") {
  const TridiagonalMatrix m({1, 2, 3}, {2, -3}, {0.5, 4});
  const auto b = balance(m);
  CHECK(b.u == std::vector<double>{1, 2, 3});
  CHECK(b.w == std::vector<double>{1.0, -12.0});
}
