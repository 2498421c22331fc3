#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"

#include "advest/broken_poly.hpp"
#include "advest/errors.hpp"
#include "advest/quadrature.hpp"
#include "advest/solvers.hpp"
#include "advest/source.hpp"

using namespace advest;

namespace {

// Independent PG1 oracle: the same scheme assembled in a nodal Lagrange
// basis with monomial test functions and an oversized quadrature rule.
// Shares nothing with the modal assembly path.
std::function<double(double)> pg1_lagrange_oracle(const AdvectionProblem& prob,
                                                  const MeshPtr& mesh, int k) {
  const int n = mesh->n_elements();
  const int dim = n * k; // continuous P_k with the inflow vertex pinned
  const int pinned = prob.beta > 0 ? 0 : n;

  const auto vertex_dof = [pinned](int i) {
    if (i == pinned) return -1;
    return i > pinned ? i - 1 : i;
  };
  // Interior (non-vertex) Lagrange nodes get ids after the vertices.
  const auto interior_dof = [n, k](int e, int m) { return n + e * (k - 1) + m; };

  const auto nodes_of = [&](int e) {
    std::vector<double> t(k + 1);
    for (int j = 0; j <= k; ++j) t[j] = mesh->x_left(e) + mesh->h(e) * j / k;
    return t;
  };
  const auto lag = [](const std::vector<double>& t, int i, double x) {
    double v = 1.0;
    for (int j = 0; j < static_cast<int>(t.size()); ++j)
      if (j != i) v *= (x - t[j]) / (t[i] - t[j]);
    return v;
  };
  const auto dlag = [](const std::vector<double>& t, int i, double x) {
    double s = 0.0;
    for (int m = 0; m < static_cast<int>(t.size()); ++m) {
      if (m == i) continue;
      double p = 1.0 / (t[i] - t[m]);
      for (int j = 0; j < static_cast<int>(t.size()); ++j)
        if (j != i && j != m) p *= (x - t[j]) / (t[i] - t[j]);
      s += p;
    }
    return s;
  };
  const auto dof_of = [&](int e, int j) {
    if (j == 0) return vertex_dof(e);
    if (j == k) return vertex_dof(e + 1);
    return interior_dof(e, j - 1);
  };

  const BoundSource bound(prob.source, *mesh);
  const auto& rule = gauss_rule(2 * k + 4);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);

  int row0 = 0;
  for (int e = 0; e < n; ++e, row0 += k) {
    const auto t = nodes_of(e);
    for (int p = 0; p < rule.order(); ++p) {
      const double x =
          mesh->x_left(e) + 0.5 * mesh->h(e) * (1.0 + rule.nodes[p]);
      const double w = 0.5 * mesh->h(e) * rule.weights[p];
      for (int r = 0; r < k; ++r) {
        const double v = std::pow(x - mesh->x_left(e), r);
        rhs[row0 + r] += w * static_cast<double>(bound.f(x)) * v;
        for (int j = 0; j <= k; ++j) {
          const int col = dof_of(e, j);
          if (col >= 0) A(row0 + r, col) += w * prob.beta * dlag(t, j, x) * v;
        }
      }
    }
  }
  const Eigen::VectorXd z = A.partialPivLu().solve(rhs);
  REQUIRE((A * z - rhs).norm() <= 1e-10 * (rhs.norm() + 1.0));

  return [mesh, k, z, nodes_of, lag, dof_of](double x) {
    const int e = mesh->find_element(x);
    const auto t = nodes_of(e);
    double v = 0.0;
    for (int j = 0; j <= k; ++j) {
      const int col = dof_of(e, j);
      if (col >= 0) v += z[col] * lag(t, j, x);
    }
    return v;
  };
}

double exact_u_at(const AdvectionProblem& prob, const BoundSource& bound,
                  double x) {
  return static_cast<double>(prob.exact_u(bound, x));
}

const std::vector<double> kSamples = {0.013, 0.22, 0.35, 0.48, 0.61,
                                      0.74, 0.86, 0.997};

} // namespace

TEST_CASE("method metadata") {
  CHECK(parse_method("pg1") == Method::pg1);
  CHECK(parse_method("pg2") == Method::pg2);
  CHECK(parse_method("dg") == Method::dg);
  CHECK_THROWS_AS(parse_method("fem"), ConfigError);
  CHECK(method_name(Method::pg1) == "pg1");
  CHECK(method_name(Method::dg) == "dg");
  CHECK(min_degree(Method::pg1) == 2);
  CHECK(min_degree(Method::pg2) == 0);
  CHECK(min_degree(Method::dg) == 1);
  CHECK(dof_count(Method::pg1, 4, 2) == 8);
  CHECK(dof_count(Method::pg2, 4, 1) == 8);
  CHECK(dof_count(Method::dg, 4, 2) == 12);
}

TEST_CASE("degree prerequisites are enforced") {
  const auto mesh = uniform_mesh(0.0, 1.0, 2);
  const AdvectionProblem prob(1.0, SourceTerm::polynomial({1.0}));
  CHECK_THROWS_AS(solve_pg1(prob, mesh, 1), std::invalid_argument);
  CHECK_THROWS_AS(solve_pg2(prob, mesh, -1), std::invalid_argument);
  CHECK_THROWS_AS(solve_dg(prob, mesh, 0), std::invalid_argument);
}

TEST_CASE("pg1 reproduces representable solutions for both velocity signs") {
  const auto mesh = graded_mesh(0.0, 1.0, 3, 1.4);

  // beta = 1, f = 2x: u = x^2 lies in the trial space.
  const AdvectionProblem fwd(1.0, SourceTerm::polynomial({0.0, 2.0}));
  const auto uf = solve_pg1(fwd, mesh, 2);
  for (double x : kSamples)
    CHECK(uf.eval(x) == doctest::Approx(x * x).epsilon(1e-12));
  CHECK(std::abs(uf.eval(0.0)) <= 1e-12);

  // beta = -1, f = 2x: u = 1 - x^2, zero at the right inflow.
  const AdvectionProblem bwd(-1.0, SourceTerm::polynomial({0.0, 2.0}));
  const auto ub = solve_pg1(bwd, mesh, 2);
  for (double x : kSamples)
    CHECK(ub.eval(x) == doctest::Approx(1.0 - x * x).epsilon(1e-11));
  CHECK(std::abs(ub.eval(1.0)) <= 1e-11);
}

TEST_CASE("pg1 agrees with an independent nodal assembly") {
  const auto mesh = graded_mesh(0.0, 1.0, 4, 1.3);
  const AdvectionProblem prob(1.7, SourceTerm::polynomial({0.4, -1.1, 0.7}));
  for (int k : {2, 3}) {
    CAPTURE(k);
    const auto u_h = solve_pg1(prob, mesh, k);
    const auto oracle = pg1_lagrange_oracle(prob, mesh, k);
    for (double x : kSamples)
      CHECK(u_h.eval(x) == doctest::Approx(oracle(x)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("pg2 is the L2 projection of the exact solution") {
  const auto mesh = graded_mesh(0.0, 1.0, 5, 1.35);
  for (const char* spec : {"poly:0.4,-1.1,0.7", "table81"}) {
    for (double beta : {1.7, -0.6}) {
      for (int k : {0, 1, 3}) {
        CAPTURE(spec);
        CAPTURE(beta);
        CAPTURE(k);
        const auto src = SourceTerm::parse(spec);
        const AdvectionProblem prob(beta, src);
        const BoundSource bound(src, *mesh);
        const auto u_h = solve_pg2(prob, mesh, k);
        const auto proj = project_L2(
            [&](double x) { return exact_u_at(prob, bound, x); }, mesh, k, 12);
        const double scale = 1.0 + proj.coeffs().norm();
        CHECK((u_h.coeffs() - proj.coeffs()).norm() <= 1e-11 * scale);
      }
    }
  }
}

TEST_CASE("pg2 with one constant element averages the exact solution") {
  const auto mesh = uniform_mesh(0.0, 1.0, 1);
  const AdvectionProblem prob(1.0, SourceTerm::polynomial({1.0}));
  const auto u_h = solve_pg2(prob, mesh, 0);
  // u = x, mean 1/2.
  CHECK(u_h.eval(0.77) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("dg reproduces continuous representable solutions") {
  const auto mesh = graded_mesh(0.0, 1.0, 3, 0.8);
  const AdvectionProblem prob(1.0, SourceTerm::polynomial({1.0}));
  const auto u_h = solve_dg(prob, mesh, 1);
  for (double x : kSamples)
    CHECK(u_h.eval(x) == doctest::Approx(x).epsilon(1e-13));
}

TEST_CASE("dg is exact at downwind element endpoints") {
  // Classic superconvergence of the upwind flux in 1D steady transport:
  // the trace propagated to the next element equals the exact solution.
  const auto src = SourceTerm::polynomial({0.3, -2.0, 1.5}); // u is cubic
  const auto mesh = graded_mesh(0.0, 1.0, 4, 1.45);

  const AdvectionProblem fwd(1.3, src);
  const BoundSource bound(src, *mesh);
  const auto uf = solve_dg(fwd, mesh, 2);
  for (int v = 1; v <= 4; ++v) {
    const double x = mesh->vertex(v);
    CHECK(uf.eval(x, Side::left) ==
          doctest::Approx(exact_u_at(fwd, bound, x)).epsilon(1e-11).scale(1.0));
  }

  const AdvectionProblem bwd(-0.8, src);
  const auto ub = solve_dg(bwd, mesh, 2);
  for (int v = 0; v < 4; ++v) {
    const double x = mesh->vertex(v);
    CHECK(ub.eval(x, Side::right) ==
          doctest::Approx(exact_u_at(bwd, bound, x)).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("solutions scale exactly with 1/beta") {
  const auto mesh = uniform_mesh(0.0, 1.0, 4);
  const auto src = SourceTerm::cell_sine_quadratic();
  const struct {
    Method m;
    int k;
  } cases[] = {{Method::pg1, 2}, {Method::pg2, 1}, {Method::dg, 2}};
  for (const auto& c : cases) {
    CAPTURE(method_name(c.m));
    const AdvectionProblem p1(0.5, src);
    const AdvectionProblem p4(2.0, src); // velocity scaled by 4
    const auto u1 = solve(c.m, p1, mesh, c.k);
    const auto u4 = solve(c.m, p4, mesh, c.k);
    // Power-of-two scaling is bitwise exact through the factorization.
    CHECK((4.0 * u4.coeffs() - u1.coeffs()).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("solution containers are sized by the trial space") {
  const auto mesh = uniform_mesh(0.0, 1.0, 3);
  const AdvectionProblem prob(1.0, SourceTerm::polynomial({1.0, 1.0}));
  const auto u = solve(Method::dg, prob, mesh, 3);
  CHECK(u.degree() == 3);
  CHECK(u.size() == 12);
  CHECK(u.mesh().get() == mesh.get());
}
