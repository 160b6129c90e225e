#include <cmath>
#include <vector>

#include <doctest.h>

#include "l1adapt/errors.hpp"
#include "l1adapt/polynomial.hpp"
#include "l1adapt/rng.hpp"
#include "oracles.hpp"

using namespace l1adapt;

namespace {

// Random b with b_1 bounded away from zero; minimum phase not guaranteed.
Polynomial random_b(SplitMix64& rng, std::size_t m) {
  std::vector<double> c(m);
  c[0] = (rng.next_unit() < 0.5 ? -1.0 : 1.0) * (0.2 + rng.next_unit());
  for (std::size_t j = 1; j < m; ++j) c[j] = 1.5 * rng.next_symmetric();
  return Polynomial(std::move(c));
}

}  // namespace

TEST_CASE("jury test agrees with companion-matrix roots") {
  SplitMix64 rng(2024);
  int nontrivial = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t m = 2 + rng.next_u64() % 4;
    Polynomial b = random_b(rng, m);
    const double rmin = oracles::min_root_modulus(b.coeffs);
    if (std::abs(rmin - 1.0) < 1e-6) continue;  // borderline, skip
    CHECK(is_minimum_phase(b) == (rmin > 1.0));
    ++nontrivial;
  }
  CHECK(nontrivial > 300);
}

TEST_CASE("root modulus bound is a valid lower bound") {
  SplitMix64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.next_u64() % 4;
    Polynomial b = random_b(rng, m);
    if (!is_minimum_phase(b)) continue;  // bound is defined past the unit disk
    const double rmin = oracles::min_root_modulus(b.coeffs);
    const double lb = min_root_modulus_lower_bound(b);
    CHECK(lb <= rmin * (1.0 + 1e-6));
    CHECK(lb >= 0.5 * rmin);  // the bisection should not be wildly loose
    ++checked;
  }
  CHECK(checked > 30);
  CHECK_THROWS_AS(min_root_modulus_lower_bound(Polynomial({1.0, -2.0})),
                  NotMinimumPhase);
}

TEST_CASE("impulse response solves the long-division identity") {
  // a(l) - 1 = l b(l) g(l): reconvolve and compare coefficient by
  // coefficient on the overlap.
  SplitMix64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 4;
    const std::size_t m = 2 + rng.next_u64() % 3;
    Polynomial b = random_b(rng, m);
    if (!is_minimum_phase(b)) continue;
    std::vector<double> a(n + 1);
    a[0] = 1.0;
    for (std::size_t i = 1; i <= n; ++i) a[i] = 2.0 * rng.next_symmetric();
    ImpulseNorm g = controller_impulse_response(Polynomial(a), b);
    REQUIRE(g.coefficients.size() >= 8);
    const std::size_t K = std::min<std::size_t>(g.coefficients.size(), 64);
    for (std::size_t k = 0; k < K; ++k) {
      // Coefficient of l^{k+1} in l b(l) g(l).
      double conv = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (k >= j && k - j < g.coefficients.size())
          conv += b[j] * g.coefficients[k - j];
      const double target = (k + 1 <= n) ? a[k + 1] : 0.0;
      CHECK(conv == doctest::Approx(target).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("norm interval is certified") {
  // |G| computed with a loose tail tolerance must bracket the tight answer.
  SplitMix64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 2 + rng.next_u64() % 3;
    Polynomial b = random_b(rng, m);
    if (!is_minimum_phase(b)) continue;
    std::vector<double> a = {1.0, 1.5 * rng.next_symmetric()};
    ImpulseNorm loose = controller_impulse_response(Polynomial(a), b, 1e-3);
    ImpulseNorm tight = controller_impulse_response(Polynomial(a), b, 1e-12);
    CHECK(tight.l1_norm >= loose.l1_norm - 1e-12);
    CHECK(tight.l1_norm <= loose.l1_norm + loose.tail_bound + 1e-9);
  }
}

TEST_CASE("geometric closed form") {
  for (double rho : {0.1, 0.5, 0.9}) {
    ImpulseNorm g =
        controller_impulse_response(Polynomial({1.0, 1.0}), Polynomial({1.0, -rho}));
    CHECK(g.l1_norm == doctest::Approx(1.0 / (1.0 - rho)).epsilon(1e-8));
  }
}

TEST_CASE("non-minimum-phase b is rejected") {
  CHECK_THROWS_AS(controller_impulse_response(Polynomial({1.0, 1.0}),
                                              Polynomial({1.0, -2.0})),
                  NotMinimumPhase);
  CHECK_THROWS_AS(jury_margin(Polynomial(std::vector<double>{})), Error);
}

TEST_CASE("stacked coefficient split") {
  auto [a, b] = split_xi({-1.0, 2.0, 3.0, 4.0, 5.0}, 2, 3);
  CHECK(a.coeffs == std::vector<double>{1.0, -1.0, 2.0});
  CHECK(b.coeffs == std::vector<double>{3.0, 4.0, 5.0});
}
