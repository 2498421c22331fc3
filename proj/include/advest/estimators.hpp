#pragma once

#include <optional>
#include <vector>

#include "advest/broken_poly.hpp"
#include "advest/source.hpp"

namespace advest {

// Guaranteed a posteriori bound for |u - u_h| in L2:
//   eta_NC,K  = |u_h - s_h|_K                    (nonconformity)
//   eta_osc,K = h_K / (pi |beta|) |(I - Pi_k') f|_K   (oscillation)
//   eta       = sqrt(sum_K (eta_NC,K + eta_osc,K)^2)
// with s_h the patchwise conforming reconstruction of degree kprime + 1.
// The bound |u - u_h| <= eta holds whenever hat orthogonality does.
struct EstimateReport {
  int n_elements = 0;
  int k = 0;
  int kprime = 0;
  double beta = 0.0;

  std::vector<double> eta_nc_K;
  std::vector<double> eta_osc_K;
  double eta_nc = 0.0;  // sqrt(sum eta_NC,K^2)
  double eta_osc = 0.0; // sqrt(sum eta_osc,K^2)
  double eta = 0.0;

  std::optional<double> error; // |u - u_h|, when the exact solution is known
  std::optional<double> i_eff; // eta / error

  bool orthogonality_ok = false;
  double max_orthogonality_ratio = 0.0;

  // Reconstruction invariant defects (relative); see assemble_global.
  double recon_vertex_jump_rel = 0.0;
  double recon_inflow_value_rel = 0.0;
  double recon_projection_defect_rel = 0.0;

  double u_h_norm = 0.0;

  // error <= eta up to a pure roundoff allowance. Vacuously true when the
  // exact solution is not available.
  bool guaranteed_bound_ok() const {
    if (!error) return true;
    return *error <= eta + 1e-12 * (eta + *error + u_h_norm);
  }
};

EstimateReport estimate(const BrokenPoly& u_h, const AdvectionProblem& prob,
                        int kprime);

// |u - u_h| in L2 over the whole domain; empty when the source has no
// closed-form antiderivative.
std::optional<double> exact_error(const BrokenPoly& u_h,
                                  const AdvectionProblem& prob);

// Efficiency of the nonconformity estimator. Locally, per element K with
// vertex patches omega_a, a in V_K:
//   eta_NC,K <= C sum_a |u - u_h|_{omega_a}
//                + sum_a h_{omega_a} / (pi |beta|) |(I - Pi_k')(f psi_a)|_{omega_a}
// and globally |u_h - s_h| <= 2 C |u - u_h| when every f psi_a lies in
// P_k'(T_a), i.e. when f is piecewise polynomial of degree <= kprime - 1.
struct EfficiencyReport {
  double c_cont_pf = 0.0;
  std::vector<double> local_ratio; // lhs / rhs per element; <= 1
  double max_local_ratio = 0.0;
  double global_ratio = 0.0; // eta_NC / (2 C |u - u_h|)
  bool global_hypothesis = false;
  bool local_hypothesis = false; // kprime >= k
};

// Throws std::invalid_argument when the exact solution is unavailable.
EfficiencyReport efficiency_report(const BrokenPoly& u_h,
                                   const AdvectionProblem& prob, int kprime);

} // namespace advest
