#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "advest/broken_poly.hpp"
#include "advest/errors.hpp"
#include "advest/estimators.hpp"
#include "advest/legendre.hpp"
#include "advest/quadrature.hpp"
#include "advest/solvers.hpp"
#include "advest/source.hpp"

using namespace advest;

namespace {

// |(I - Pi_kp) f| on [xl, xl + h] by plain quadrature: project with a large
// rule, then integrate the pointwise remainder.
double remainder_norm(const std::function<double(double)>& f, double xl,
                      double h, int kp, int q) {
  const auto& rule = gauss_rule(q);
  std::vector<double> fv(rule.order());
  for (int p = 0; p < rule.order(); ++p)
    fv[p] = f(xl + 0.5 * h * (1.0 + rule.nodes[p]));
  auto c = legendre::project_values<double>(kp, h, rule.nodes, rule.weights, fv);
  std::vector<double> phi(kp + 1);
  double s = 0.0;
  for (int p = 0; p < rule.order(); ++p) {
    legendre::phi_values(kp, h, rule.nodes[p], phi.data());
    double pv = 0.0;
    for (int j = 0; j <= kp; ++j) pv += c[j] * phi[j];
    const double d = fv[p] - pv;
    s += 0.5 * h * rule.weights[p] * d * d;
  }
  return std::sqrt(s);
}

} // namespace

TEST_CASE("exact error of the zero solution") {
  const auto mesh = uniform_mesh(0.0, 1.0, 1);
  const AdvectionProblem prob(1.0, SourceTerm::polynomial({1.0}));
  const BrokenPoly zero(mesh, 1);
  const auto err = exact_error(zero, prob);
  REQUIRE(err.has_value());
  CHECK(*err == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("exact error agrees between polynomial and callable sources") {
  const auto mesh = graded_mesh(0.0, 1.0, 3, 1.4);
  const AdvectionProblem p_poly(1.3, SourceTerm::polynomial({0.0, 1.0}));
  const AdvectionProblem p_call(
      1.3, SourceTerm::make_callable([](double x) { return x; },
                                     [](double x) { return 0.5 * x * x; }));
  const auto u_h = solve_pg2(p_poly, mesh, 1);
  const auto e1 = exact_error(u_h, p_poly);
  const auto e2 = exact_error(u_h, p_call);
  REQUIRE(e1.has_value());
  REQUIRE(e2.has_value());
  CHECK(*e1 == doctest::Approx(*e2).epsilon(1e-12));
}

TEST_CASE("report internals are mutually consistent") {
  const auto mesh = graded_mesh(0.0, 1.0, 4, 1.3);
  const AdvectionProblem prob(1.0, SourceTerm::arctan_source());
  const auto u_h = solve_dg(prob, mesh, 1);
  const auto rep = estimate(u_h, prob, 1);

  REQUIRE(rep.n_elements == 4);
  REQUIRE(rep.eta_nc_K.size() == 4);
  REQUIRE(rep.eta_osc_K.size() == 4);
  double nc2 = 0.0, osc2 = 0.0, eta2 = 0.0;
  for (int e = 0; e < 4; ++e) {
    CHECK(rep.eta_nc_K[e] >= 0.0);
    CHECK(rep.eta_osc_K[e] >= 0.0);
    nc2 += rep.eta_nc_K[e] * rep.eta_nc_K[e];
    osc2 += rep.eta_osc_K[e] * rep.eta_osc_K[e];
    const double t = rep.eta_nc_K[e] + rep.eta_osc_K[e];
    eta2 += t * t;
  }
  CHECK(rep.eta_nc == doctest::Approx(std::sqrt(nc2)).epsilon(1e-14));
  CHECK(rep.eta_osc == doctest::Approx(std::sqrt(osc2)).epsilon(1e-14));
  CHECK(rep.eta == doctest::Approx(std::sqrt(eta2)).epsilon(1e-14));
  CHECK(rep.orthogonality_ok);
  CHECK(rep.max_orthogonality_ratio <= 1e-11);
  CHECK(rep.recon_vertex_jump_rel <= 1e-10);
  CHECK(rep.u_h_norm == doctest::Approx(u_h.norm()));
  REQUIRE(rep.error.has_value());
  REQUIRE(rep.i_eff.has_value());
  CHECK(*rep.i_eff == doctest::Approx(rep.eta / *rep.error).epsilon(1e-12));
  CHECK(rep.guaranteed_bound_ok());
}

TEST_CASE("demo-source efficiency indices match their pinned values") {
  const auto mesh = uniform_mesh(0.0, 1.0, 4);
  const AdvectionProblem prob(1.0, SourceTerm::cell_sine_quadratic());

  const auto pg2 = estimate(solve_pg2(prob, mesh, 1), prob, 1);
  REQUIRE(pg2.i_eff.has_value());
  CHECK(*pg2.i_eff == doctest::Approx(1.234).epsilon(0.002));

  const auto dg = estimate(solve_dg(prob, mesh, 1), prob, 1);
  REQUIRE(dg.i_eff.has_value());
  CHECK(*dg.i_eff == doctest::Approx(1.126).epsilon(0.002));
}

TEST_CASE("quadratic elements estimate the demo source exactly") {
  // At k = k' = 2 the oscillation vanishes and s_h recovers the exact
  // solution, so the efficiency index is 1 to near machine accuracy.
  const auto mesh = uniform_mesh(0.0, 1.0, 4);
  const AdvectionProblem prob(1.0, SourceTerm::cell_sine_quadratic());
  for (Method m : {Method::pg2, Method::dg}) {
    CAPTURE(method_name(m));
    const auto rep = estimate(solve(m, prob, mesh, 2), prob, 2);
    REQUIRE(rep.i_eff.has_value());
    CHECK(std::abs(*rep.i_eff - 1.0) <= 1e-8);
    CHECK(rep.eta_osc <= 1e-15 * (1.0 + rep.u_h_norm));
  }
}

TEST_CASE("smooth-source convergence rows match their pinned values") {
  const auto src = SourceTerm::arctan_source();
  const AdvectionProblem prob(1.0, src);

  SUBCASE("pg2, k = 1, 4 elements") {
    const auto rep = estimate(solve_pg2(prob, uniform_mesh(0.0, 1.0, 4), 1), prob, 1);
    REQUIRE(rep.error.has_value());
    CHECK(*rep.error == doctest::Approx(1.868e-3).epsilon(0.01));
    CHECK(rep.eta_nc == doctest::Approx(1.867e-3).epsilon(0.01));
    CHECK(rep.eta_osc == doctest::Approx(3.074e-4).epsilon(0.01));
    CHECK(rep.eta == doctest::Approx(2.147e-3).epsilon(0.01));
  }
  SUBCASE("dg, k = 1, 4 elements") {
    const auto rep = estimate(solve_dg(prob, uniform_mesh(0.0, 1.0, 4), 1), prob, 1);
    CHECK(rep.eta_nc == doctest::Approx(3.048e-3).epsilon(0.01));
    CHECK(rep.eta_osc == doctest::Approx(3.074e-4).epsilon(0.01));
    CHECK(*rep.error == doctest::Approx(3.021e-3).epsilon(0.01));
    CHECK(rep.eta == doctest::Approx(3.327e-3).epsilon(0.01));
    CHECK(*rep.i_eff == doctest::Approx(1.10).epsilon(0.02));
  }
  SUBCASE("dg, k = 2, 16 elements") {
    const auto rep = estimate(solve_dg(prob, uniform_mesh(0.0, 1.0, 16), 2), prob, 2);
    CHECK(rep.eta_nc == doctest::Approx(6.299e-7).epsilon(0.01));
  }
}

TEST_CASE("oscillation terms match direct quadrature") {
  SUBCASE("analytic source") {
    const auto mesh = graded_mesh(0.0, 1.0, 4, 1.25);
    const double beta = 1.7;
    const AdvectionProblem prob(beta, SourceTerm::arctan_source());
    const auto rep = estimate(solve_pg2(prob, mesh, 1), prob, 1);
    for (int e = 0; e < 4; ++e) {
      const double h = mesh->h(e);
      const double want = h / beta *
                          remainder_norm([](double x) { return std::atan(x); },
                                         mesh->x_left(e), h, 1, 30);
      CHECK(rep.eta_osc_K[e] == doctest::Approx(want).epsilon(1e-8));
    }
  }

  SUBCASE("piecewise-quadratic source has no oscillation at kprime >= 2") {
    const auto mesh = uniform_mesh(0.0, 1.0, 4);
    const AdvectionProblem prob(1.0, SourceTerm::cell_sine_quadratic());
    const auto rep = estimate(solve_pg2(prob, mesh, 2), prob, 2);
    for (int e = 0; e < 4; ++e) CHECK(rep.eta_osc_K[e] == 0.0);
  }

  SUBCASE("pure quadratic against the closed form") {
    // |(I - Pi_1) x^2|_K = (h^2/6) sqrt(h/5).
    const auto mesh = graded_mesh(0.0, 1.0, 3, 1.5);
    const double beta = -0.8;
    const AdvectionProblem prob(beta, SourceTerm::polynomial({0.0, 0.0, 1.0}));
    const auto rep = estimate(solve_pg2(prob, mesh, 1), prob, 1);
    for (int e = 0; e < 3; ++e) {
      const double h = mesh->h(e);
      const double want =
          h / std::abs(beta) * (h * h / 6.0) * std::sqrt(h / 5.0);
      CHECK(rep.eta_osc_K[e] == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("the bound holds across a polynomial sweep") {
  for (int n : {2, 5, 9}) {
    const auto mesh = graded_mesh(0.0, 1.0, n, 1.2);
    for (double beta : {1.0, -2.5, 0.01}) {
      for (int k : {0, 1, 2}) {
        CAPTURE(n);
        CAPTURE(beta);
        CAPTURE(k);
        const AdvectionProblem prob(beta, SourceTerm::polynomial({0.7, -1.3, 0.5, 0.2}));
        const auto rep = estimate(solve_pg2(prob, mesh, k), prob, k);
        REQUIRE(rep.i_eff.has_value());
        CHECK(rep.guaranteed_bound_ok());
        CHECK(*rep.i_eff >= 1.0 - 1e-9);
      }
    }
  }
}

TEST_CASE("efficiency report") {
  SUBCASE("exact solution gives zero ratios") {
    // The zero source is the one case where u_h = u holds exactly in
    // floating point, so the 0/0 ratio convention is exercised for real.
    const auto mesh = uniform_mesh(0.0, 1.0, 4);
    const AdvectionProblem prob(1.0, SourceTerm::polynomial({0.0}));
    const auto eff = efficiency_report(solve_pg2(prob, mesh, 1), prob, 1);
    CHECK(eff.max_local_ratio == 0.0);
    CHECK(eff.global_ratio == 0.0);
  }

  SUBCASE("resolved solution estimates at roundoff") {
    const auto mesh = uniform_mesh(0.0, 1.0, 4);
    const AdvectionProblem prob(1.0, SourceTerm::polynomial({0.0, 2.0}));
    const auto rep = estimate(solve_pg1(prob, mesh, 2), prob, 3);
    REQUIRE(rep.error.has_value());
    CHECK(rep.eta_nc <= 1e-13);
    CHECK(*rep.error <= 1e-13);
    CHECK(rep.guaranteed_bound_ok());
  }

  SUBCASE("local bound holds with constant one") {
    const auto mesh = uniform_mesh(0.0, 1.0, 16);
    const AdvectionProblem prob(1.0, SourceTerm::cell_sine_quadratic());
    const auto u_h = solve_pg2(prob, mesh, 1);
    const auto eff = efficiency_report(u_h, prob, 1);
    CHECK(eff.local_hypothesis);
    CHECK(eff.c_cont_pf == doctest::Approx(3.0));
    REQUIRE(eff.local_ratio.size() == 16);
    CHECK(eff.max_local_ratio <= 1.0 + 1e-9);
    CHECK(eff.max_local_ratio > 0.0);
  }

  SUBCASE("global bound holds under its hypothesis") {
    const auto mesh = uniform_mesh(0.0, 1.0, 8);
    const AdvectionProblem demo(1.0, SourceTerm::cell_sine_quadratic());
    const auto e1 = efficiency_report(solve_pg2(demo, mesh, 2), demo, 3);
    CHECK(e1.global_hypothesis);
    CHECK(e1.global_ratio <= 1.0 + 1e-9);

    // Constant source at k = 0: the hypothesis holds and u = x / beta is
    // genuinely unresolved, so the ratio is a real number below one.
    const AdvectionProblem unit(1.0, SourceTerm::polynomial({1.0}));
    const auto e2 = efficiency_report(solve_pg2(unit, mesh, 0), unit, 1);
    CHECK(e2.global_hypothesis);
    CHECK(e2.global_ratio > 0.0);
    CHECK(e2.global_ratio <= 1.0 + 1e-9);
  }

  SUBCASE("hypothesis flags reflect the configuration") {
    const auto mesh = uniform_mesh(0.0, 1.0, 4);
    const AdvectionProblem prob(1.0, SourceTerm::arctan_source());
    const auto eff = efficiency_report(solve_pg2(prob, mesh, 2), prob, 1);
    CHECK(!eff.local_hypothesis); // kprime < k
    CHECK(!eff.global_hypothesis); // analytic source
  }
}

TEST_CASE("estimator input validation and degraded sources") {
  const auto mesh = uniform_mesh(0.0, 1.0, 3);
  const AdvectionProblem prob(1.0, SourceTerm::polynomial({1.0}));
  const auto u_h = solve_pg2(prob, mesh, 1);
  CHECK_THROWS_AS(estimate(u_h, prob, -1), std::invalid_argument);

  // A callable source without an antiderivative still yields the estimate,
  // but no error, no efficiency index, and a vacuous bound.
  const AdvectionProblem blind(
      1.0, SourceTerm::make_callable([](double x) { return std::exp(x); }));
  const auto v_h = solve_pg2(blind, mesh, 1);
  CHECK(!exact_error(v_h, blind).has_value());
  const auto rep = estimate(v_h, blind, 1);
  CHECK(!rep.error.has_value());
  CHECK(!rep.i_eff.has_value());
  CHECK(rep.guaranteed_bound_ok());
  CHECK(rep.eta > 0.0);
  CHECK_THROWS_AS(efficiency_report(v_h, blind, 1), std::invalid_argument);
}
