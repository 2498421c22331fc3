#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace advest {

// Gauss-Legendre rule on the reference interval [-1, 1].
// Exact for polynomials of degree <= 2q - 1.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order() const { return static_cast<int>(nodes.size()); }
  int exactness() const { return 2 * order() - 1; }
};

// q-point rule, 1 <= q <= 30. Rules are computed once and cached.
const QuadRule& gauss_rule(int q);

// Quadrature order used wherever a non-polynomial source is integrated.
// Default 15; the ADVEST_QUAD_ORDER environment variable overrides it.
int analytic_quad_order();

namespace detail {

// Newton iteration on the Legendre polynomial's roots, carried out in the
// requested scalar type. Used directly for extended-precision internals;
// the public double rules are derived from the long double tables.
template <typename S>
void gauss_nodes(int q, std::vector<S>& x, std::vector<S>& w) {
  if (q < 1) throw std::invalid_argument("gauss_nodes: q must be positive");
  x.assign(q, S(0));
  w.assign(q, S(0));
  const S one = S(1);
  const long double pi = 3.14159265358979323846264338327950288L;
  // Roots come in +/- pairs; resolve the left half and mirror.
  for (int i = 0; i < (q + 1) / 2; ++i) {
    S xi = S(-std::cos(static_cast<double>(pi * (i + 0.75) / (q + 0.5))));
    S dp = S(0);
    for (int it = 0; it < 100; ++it) {
      // Recurrence for P_q and P_q' at xi.
      S p0 = one, p1 = xi;
      for (int j = 2; j <= q; ++j) {
        S p2 = ((2 * j - 1) * xi * p1 - (j - 1) * p0) / S(j);
        p0 = p1;
        p1 = p2;
      }
      dp = q * (xi * p1 - p0) / (xi * xi - one);
      S dx = p1 / dp;
      xi -= dx;
      if (std::abs(static_cast<double>(dx)) < 1e-19) break;
    }
    x[i] = xi;
    x[q - 1 - i] = -xi;
    w[i] = S(2) / ((one - xi * xi) * dp * dp);
    w[q - 1 - i] = w[i];
  }
  if (q % 2 == 1) x[q / 2] = S(0);
}

// Cached long double rule; internal callers may exceed the public q cap.
const std::vector<long double>& gauss_nodes_ld(int q);
const std::vector<long double>& gauss_weights_ld(int q);

} // namespace detail

} // namespace advest
