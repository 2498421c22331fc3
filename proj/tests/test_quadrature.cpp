#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "advest/quadrature.hpp"

using namespace advest;

namespace {

double integrate_monomial(const QuadRule& r, int p) {
  double s = 0.0;
  for (int i = 0; i < r.order(); ++i)
    s += r.weights[i] * std::pow(r.nodes[i], p);
  return s;
}

} // namespace

TEST_CASE("gauss rule small orders have the textbook nodes") {
  const auto& r1 = gauss_rule(1);
  REQUIRE(r1.order() == 1);
  CHECK(std::abs(r1.nodes[0]) <= 1e-16);
  CHECK(r1.weights[0] == doctest::Approx(2.0));

  const auto& r2 = gauss_rule(2);
  REQUIRE(r2.order() == 2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(1.0));
  CHECK(r2.weights[1] == doctest::Approx(1.0));
}

TEST_CASE("five-point rule integrates x^8 exactly") {
  CHECK(integrate_monomial(gauss_rule(5), 8) ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("every cached rule is exact to its advertised degree") {
  for (int q = 1; q <= 30; ++q) {
    const auto& r = gauss_rule(q);
    REQUIRE(r.order() == q);
    CHECK(r.exactness() == 2 * q - 1);
    // Even monomial of highest exact degree, and the odd one below it.
    const int p = 2 * q - 2;
    const double exact = 2.0 / (p + 1);
    CHECK(std::abs(integrate_monomial(r, p) - exact) <= 1e-13 * exact + 1e-15);
    CHECK(std::abs(integrate_monomial(r, 2 * q - 1)) <= 1e-13);
    // Weights sum to the interval length, nodes are symmetric and sorted.
    double wsum = 0.0;
    for (int i = 0; i < q; ++i) {
      wsum += r.weights[i];
      CHECK(r.nodes[i] == doctest::Approx(-r.nodes[q - 1 - i]).epsilon(1e-15).scale(1.0));
      if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
      CHECK(r.weights[i] > 0.0);
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("order is capped") {
  CHECK_THROWS_AS(gauss_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_rule(31), std::invalid_argument);
}

TEST_CASE("analytic source order defaults to 15") {
  CHECK(analytic_quad_order() == 15);
}

TEST_CASE("extended-precision rules go past the public cap") {
  const auto& x = detail::gauss_nodes_ld(40);
  const auto& w = detail::gauss_weights_ld(40);
  REQUIRE(x.size() == 40);
  REQUIRE(w.size() == 40);
  long double wsum = 0.0L;
  for (auto v : w) wsum += v;
  CHECK(std::abs(static_cast<double>(wsum - 2.0L)) < 1e-17);
  // Against the double tables where both exist.
  const auto& r = gauss_rule(12);
  const auto& x12 = detail::gauss_nodes_ld(12);
  for (int i = 0; i < 12; ++i)
    CHECK(std::abs(r.nodes[i] - static_cast<double>(x12[i])) < 1e-15);
}
