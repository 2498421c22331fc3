#pragma once

#include <string>

#include "advest/broken_poly.hpp"
#include "advest/mesh.hpp"
#include "advest/source.hpp"

namespace advest {

enum class Method { pg1, pg2, dg };

Method parse_method(const std::string& name);
std::string method_name(Method m);
// Smallest admissible polynomial degree: 2 for pg1, 0 for pg2, 1 for dg.
int min_degree(Method m);
// Trial-space dimension on n elements at degree k.
int dof_count(Method m, int n, int k);

// Petrov-Galerkin with conforming trial functions: u_h in P_k cap H^1,
// u_h = 0 imposed strongly at the inflow vertex, tested against broken
// P_{k-1}: (beta u_h', v) = (f, v). Requires k >= 2.
BrokenPoly solve_pg1(const AdvectionProblem& prob, const MeshPtr& mesh, int k);

// Ultra-weak Petrov-Galerkin: u_h in broken P_k tested against continuous
// P_{k+1} vanishing at the outflow vertex: -(u_h, beta v') = (f, v).
// Requires k >= 0.
BrokenPoly solve_pg2(const AdvectionProblem& prob, const MeshPtr& mesh, int k);

// Discontinuous Galerkin with upwind flux: broken P_k trial and test,
//   B(u, v) = -sum_K (u, beta v')_K
//             + sum_interior ( -beta {u}[v] + (|beta|/2)[u][v] )
//             + sum_boundary (beta n)_+ u v,
// jumps [w] = w^+ - w^- and averages across interior vertices, n = +1 there.
// Requires k >= 1.
BrokenPoly solve_dg(const AdvectionProblem& prob, const MeshPtr& mesh, int k);

BrokenPoly solve(Method m, const AdvectionProblem& prob, const MeshPtr& mesh, int k);

} // namespace advest
