#pragma once

#include <functional>
#include <vector>

#include "advest/broken_poly.hpp"
#include "advest/mesh.hpp"
#include "advest/source.hpp"

namespace advest {

// The residual functional of the ultra-weak formulation,
//   <R(u_h), v> = (f, v) + (u_h, beta v'),
// which satisfies <R(u_h), v> = -(u - u_h, beta v') against the exact u.
// Its dual norm over {v in H^1 : v(outflow) = 0} with the velocity-scaled
// test norm |beta v'| equals the L2 error exactly.

// Evaluate <R(u_h), v> for a test function given with its derivative,
// by q-point Gauss quadrature per mesh element.
double apply_residual(const BrokenPoly& u_h, const AdvectionProblem& prob,
                      const std::function<double(double)>& v,
                      const std::function<double(double)>& dv, int q = 15);

// Residuals of the hat functions, r_a = <R(u_h), psi_a>, for every interior
// and inflow vertex a. All three schemes annihilate them by construction.
struct HatResiduals {
  std::vector<int> anchor;
  std::vector<double> value;
  std::vector<double> scale; // |f|_{omega_a} h_{omega_a} + |beta| |u_h|_{omega_a}
  double max_ratio = 0.0;    // max |value| / scale
  bool pass(double tol = 1e-11) const { return max_ratio <= tol; }
};
HatResiduals check_hat_orthogonality(const BrokenPoly& u_h,
                                     const AdvectionProblem& prob);

// Discrete dual norm of R(u_h) over the conforming test space of degree
// k + degree_boost on the m-fold refined mesh (Riesz representative in the
// |beta v'| inner product). Monotone nondecreasing in m and the boost, with
// limit |u - u_h|.
double dual_norm_global(const BrokenPoly& u_h, const AdvectionProblem& prob,
                        int m = 8, int degree_boost = 2);

// Patch-localized dual norms |R|_{V_a'} with V_a the local test spaces:
// zero trace on the whole patch boundary for interior and outflow anchors,
// zero only at the patch outflow end for the inflow anchor.
struct DualNormReport {
  double global = 0.0;
  std::vector<Patch> patches;
  std::vector<double> local; // one per patch
  double sum_local_sq = 0.0;
  double c_cont_pf = 1.0;
  // global^2 <= 2 C^2 sum_a local_a^2 (needs hat orthogonality), and
  // sum_a local_a^2 <= 2 global^2 (unconditional).
  double upper_lhs = 0.0, upper_rhs = 0.0;
  double lower_lhs = 0.0, lower_rhs = 0.0;
  bool upper_ok = false, lower_ok = false;
};
DualNormReport dual_norms_local(const BrokenPoly& u_h, const AdvectionProblem& prob,
                                int m = 8, int degree_boost = 2);

// Continuity constant of the partition-of-unity localization,
// max_a (1 + h_{omega_a} |psi_a'|_inf); equals 3 on uniform meshes.
double continuity_constant(const Mesh1D& mesh);

} // namespace advest
