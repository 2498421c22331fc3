#pragma once

#include <vector>

#include <Eigen/Dense>

#include "advest/broken_poly.hpp"
#include "advest/mesh.hpp"
#include "advest/source.hpp"

namespace advest {

struct PatchReconstruction {
  Patch patch;
  int kprime = 0;
  // Broken P_k' coefficients of s_a on the patch elements, element-major.
  Eigen::VectorXd coeffs;
  double hat_residual = 0.0;           // r_a at the anchor (0 for outflow anchors)
  double solve_residual = 0.0;         // dense-solve defect
  double constant_test_residual = 0.0; // interior: dropped constant-test equation
  double inflow_value = 0.0;           // inflow anchors: s_a at the inflow endpoint
  double stability_ratio = 0.0;        // |s_a| / (h |f| + |u_h|) on the patch
};

struct Reconstruction {
  BrokenPoly s_h; // degree kprime+1, conforming, zero inflow trace
  int kprime = 0;
  std::vector<PatchReconstruction> patches;
  // Scaled invariant defects; all vanish up to roundoff.
  double max_vertex_jump_rel = 0.0;
  double inflow_value_rel = 0.0;
  double projection_defect_rel = 0.0; // |beta s_h' - Pi_k' f|
};

// Patch problem at a vertex: find s_a in P_k'(T_a) cap H^1(omega_a) with
//   (beta (psi_a s_a)', v)_{omega_a} = (f psi_a + beta psi_a' u_h, v)_{omega_a}
// for all v in P_k'(T_a). On interior patches the globally constant test
// function is removed (its equation follows from hat orthogonality and is
// re-checked after the solve); boundary patches solve the square system as
// is, and the zero inflow value of s_a is a consequence, asserted post-solve.
// Pre: hat orthogonality at interior/inflow anchors (PreconditionViolated).
PatchReconstruction solve_patch(int anchor, const BrokenPoly& u_h,
                                const AdvectionProblem& prob, int kprime);

// s_h = sum_a psi_a s_a: continuous, zero at inflow, degree kprime+1, with
// beta s_h' = Pi_k' f elementwise. The three invariants are verified to
// 1e-10 relative (SolverFailure otherwise).
Reconstruction assemble_global(const BrokenPoly& u_h,
                               const AdvectionProblem& prob, int kprime);

namespace detail {

// Extended-precision core shared with the estimator. Coefficients are kept
// in long double so the nonconformity estimator survives the cancellation
// u_h - s_h when both are machine-close to the exact solution.
struct ReconCore {
  int kprime = 0;
  VecX<long double> s; // full-mesh broken coefficients, blocks of kprime+2
  std::vector<PatchReconstruction> patches;
  long double max_vertex_jump_rel = 0.0L;
  long double inflow_value_rel = 0.0L;
  long double projection_defect_rel = 0.0L;
  bool orthogonality_ok = true;
  double max_orthogonality_ratio = 0.0;
};

ReconCore reconstruct_core(const BrokenPoly& u_h, const AdvectionProblem& prob,
                           const BoundSource& bound, int kprime,
                           bool enforce_orthogonality);

} // namespace detail

} // namespace advest
