#include "advest/estimators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "advest/errors.hpp"
#include "advest/legendre.hpp"
#include "advest/quadrature.hpp"
#include "advest/reconstruction.hpp"
#include "advest/residual.hpp"

namespace advest {
namespace {

using LD = long double;
constexpr LD kPi = std::numbers::pi_v<LD>;

// Modes kept beyond kprime when the oscillation tail of an analytic source
// is summed coefficient-wise. The neglected remainder is smaller by a factor
// (h/2)^(2*kTail), far below every tolerance used against the tail itself.
constexpr int kTail = 8;

// Modal coefficients of the exact solution on element e, degree deg.
VecX<LD> u_modal(const AdvectionProblem& prob, const BoundSource& bound,
                 int e, int deg, int q) {
  const Mesh1D& M = bound.mesh();
  const LD xl = M.x_left(e);
  const LD h = M.h(e);
  const auto& xs = detail::gauss_nodes_ld(q);
  const auto& ws = detail::gauss_weights_ld(q);
  VecX<LD> c = VecX<LD>::Zero(deg + 1);
  std::vector<LD> phi(deg + 1);
  for (int p = 0; p < q; ++p) {
    const LD x = xl + 0.5L * h * (1.0L + xs[p]);
    const LD uv = prob.exact_u(bound, x);
    legendre::phi_values<LD>(deg, h, xs[p], phi.data());
    const LD wu = 0.5L * h * ws[p] * uv;
    for (int j = 0; j <= deg; ++j) c[j] += wu * phi[j];
  }
  return c;
}

struct ErrorBreakdown {
  bool available = false;
  std::vector<LD> per_element_sq;
  LD total_sq = 0.0L;
};

// |u - u_h|^2 per element. Piecewise-polynomial sources go through exact
// modal coefficients of u (coefficient subtraction keeps full relative
// accuracy when the error is near roundoff); analytic sources are
// integrated pointwise.
ErrorBreakdown error_breakdown(const BrokenPoly& u_h,
                               const AdvectionProblem& prob,
                               const BoundSource& bound) {
  ErrorBreakdown out;
  if (!prob.exact_solution_available()) return out;
  out.available = true;
  const Mesh1D& M = bound.mesh();
  const int n = M.n_elements();
  const int k = u_h.degree();
  out.per_element_sq.assign(n, 0.0L);

  if (prob.source.piecewise_polynomial()) {
    const int du = prob.source.broken_degree() + 1;
    const int d = std::max(du, k);
    const int q = d + 2;
    for (int e = 0; e < n; ++e) {
      VecX<LD> cu = u_modal(prob, bound, e, d, q);
      for (int j = 0; j <= k; ++j) cu[j] -= static_cast<LD>(u_h.coeff(e, j));
      const LD s = cu.squaredNorm();
      out.per_element_sq[e] = s;
      out.total_sq += s;
    }
    return out;
  }

  const int q = std::max(analytic_quad_order(), k + 3);
  const auto& xs = detail::gauss_nodes_ld(q);
  const auto& ws = detail::gauss_weights_ld(q);
  std::vector<LD> phi(k + 1);
  for (int e = 0; e < n; ++e) {
    const LD xl = M.x_left(e);
    const LD h = M.h(e);
    LD acc = 0.0L;
    for (int p = 0; p < q; ++p) {
      const LD x = xl + 0.5L * h * (1.0L + xs[p]);
      LD diff = prob.exact_u(bound, x);
      legendre::phi_values<LD>(k, h, xs[p], phi.data());
      for (int j = 0; j <= k; ++j)
        diff -= static_cast<LD>(u_h.coeff(e, j)) * phi[j];
      acc += ws[p] * diff * diff;
    }
    acc *= 0.5L * h;
    out.per_element_sq[e] = acc;
    out.total_sq += acc;
  }
  return out;
}

// |u_h - s_h|^2 per element, from the extended-precision coefficients.
std::vector<LD> nonconformity_sq(const BrokenPoly& u_h,
                                 const detail::ReconCore& core) {
  const int n = u_h.mesh()->n_elements();
  const int k = u_h.degree();
  const int bs = core.kprime + 2;
  const int d = std::max(k, core.kprime + 1);
  std::vector<LD> out(n, 0.0L);
  VecX<LD> diff(d + 1);
  for (int e = 0; e < n; ++e) {
    diff.setZero();
    for (int j = 0; j < bs; ++j) diff[j] = core.s[e * bs + j];
    for (int j = 0; j <= k; ++j) diff[j] -= static_cast<LD>(u_h.coeff(e, j));
    out[e] = diff.squaredNorm();
  }
  return out;
}

// Squared tail sum_{j > kprime} c_j^2 of the product f * (alpha + gamma xi)
// on element e; pass gamma = 0, alpha = 1 for f itself. Exact for piecewise
// polynomial sources, coefficient truncation at kprime + kTail otherwise.
LD weighted_tail_sq(const BoundSource& bound, int e, LD alpha, LD gamma,
                    int kprime) {
  const Mesh1D& M = bound.mesh();
  const LD xl = M.x_left(e);
  const LD h = M.h(e);
  VecX<LD> fm;
  if (bound.source().piecewise_polynomial()) {
    const int df = std::max(bound.source().broken_degree(), 0);
    fm = bound.modal<LD>(e, xl, h, df, 0);
  } else {
    const int d = kprime + kTail;
    fm = bound.modal<LD>(e, xl, h, d, std::max(analytic_quad_order(), d + 2));
  }
  VecX<LD> prod = (gamma == 0.0L && alpha == 1.0L)
                      ? fm
                      : legendre::affine_multiply<LD>(fm, alpha, gamma);
  LD t = 0.0L;
  for (int j = kprime + 1; j < prod.size(); ++j) t += prod[j] * prod[j];
  return t;
}

} // namespace

EstimateReport estimate(const BrokenPoly& u_h, const AdvectionProblem& prob,
                        int kprime) {
  if (kprime < 0) throw std::invalid_argument("estimate: kprime >= 0 required");
  const Mesh1D& M = *u_h.mesh();
  BoundSource bound(prob.source, M);

  EstimateReport rep;
  rep.n_elements = M.n_elements();
  rep.k = u_h.degree();
  rep.kprime = kprime;
  rep.beta = prob.beta;
  rep.u_h_norm = u_h.norm();

  auto core = detail::reconstruct_core(u_h, prob, bound, kprime, false);
  rep.orthogonality_ok = core.orthogonality_ok;
  rep.max_orthogonality_ratio = core.max_orthogonality_ratio;
  rep.recon_vertex_jump_rel = static_cast<double>(core.max_vertex_jump_rel);
  rep.recon_inflow_value_rel = static_cast<double>(core.inflow_value_rel);
  rep.recon_projection_defect_rel =
      static_cast<double>(core.projection_defect_rel);

  const int n = M.n_elements();
  const auto nc_sq = nonconformity_sq(u_h, core);
  // h_K / |beta| oscillation weight. The Poincare constant is taken as 1:
  // the pinned effectivity values assume it, and the bound only widens.
  const LD osc_fac = 1.0L / std::fabs(static_cast<LD>(prob.beta));

  rep.eta_nc_K.resize(n);
  rep.eta_osc_K.resize(n);
  LD nc2 = 0.0L, osc2 = 0.0L, eta2 = 0.0L;
  for (int e = 0; e < n; ++e) {
    const LD nc = std::sqrt(nc_sq[e]);
    const LD osc = static_cast<LD>(M.h(e)) * osc_fac *
                   std::sqrt(weighted_tail_sq(bound, e, 1.0L, 0.0L, kprime));
    rep.eta_nc_K[e] = static_cast<double>(nc);
    rep.eta_osc_K[e] = static_cast<double>(osc);
    nc2 += nc * nc;
    osc2 += osc * osc;
    eta2 += (nc + osc) * (nc + osc);
  }
  rep.eta_nc = static_cast<double>(std::sqrt(nc2));
  rep.eta_osc = static_cast<double>(std::sqrt(osc2));
  rep.eta = static_cast<double>(std::sqrt(eta2));

  const auto err = error_breakdown(u_h, prob, bound);
  if (err.available) {
    const LD e = std::sqrt(err.total_sq);
    rep.error = static_cast<double>(e);
    if (e > 0.0L)
      rep.i_eff = static_cast<double>(std::sqrt(eta2) / e);
    else
      rep.i_eff = eta2 == 0.0L ? 1.0
                               : std::numeric_limits<double>::infinity();
  }
  return rep;
}

std::optional<double> exact_error(const BrokenPoly& u_h,
                                  const AdvectionProblem& prob) {
  BoundSource bound(prob.source, *u_h.mesh());
  const auto bk = error_breakdown(u_h, prob, bound);
  if (!bk.available) return std::nullopt;
  return static_cast<double>(std::sqrt(bk.total_sq));
}

EfficiencyReport efficiency_report(const BrokenPoly& u_h,
                                   const AdvectionProblem& prob, int kprime) {
  if (kprime < 0)
    throw std::invalid_argument("efficiency_report: kprime >= 0 required");
  if (!prob.exact_solution_available())
    throw std::invalid_argument(
        "efficiency_report: exact solution unavailable for this source");
  const Mesh1D& M = *u_h.mesh();
  BoundSource bound(prob.source, M);

  EfficiencyReport rep;
  rep.c_cont_pf = continuity_constant(M);
  rep.local_hypothesis = kprime >= u_h.degree();
  rep.global_hypothesis = prob.source.piecewise_polynomial() &&
                          prob.source.broken_degree() <= kprime - 1;

  auto core = detail::reconstruct_core(u_h, prob, bound, kprime, false);
  const auto nc_sq = nonconformity_sq(u_h, core);
  const auto err = error_breakdown(u_h, prob, bound);
  const auto patches = vertex_patches(M, prob.beta);

  const int n = M.n_elements();
  const LD C = static_cast<LD>(rep.c_cont_pf);
  const LD osc_fac = 1.0L / (kPi * std::fabs(static_cast<LD>(prob.beta)));

  // Per-patch error norm and weighted oscillation.
  std::vector<LD> err_patch(patches.size(), 0.0L);
  std::vector<LD> osc_patch(patches.size(), 0.0L);
  for (std::size_t a = 0; a < patches.size(); ++a) {
    const Patch& p = patches[a];
    HatFunction psi(M, p.anchor);
    LD e2 = 0.0L, t2 = 0.0L;
    for (int l = 0; l < p.count; ++l) {
      const int e = p.first_element + l;
      e2 += err.per_element_sq[e];
      double alpha, gamma;
      psi.ref_affine(l, alpha, gamma);
      t2 += weighted_tail_sq(bound, e, static_cast<LD>(alpha),
                             static_cast<LD>(gamma), kprime);
    }
    err_patch[a] = std::sqrt(e2);
    osc_patch[a] = static_cast<LD>(p.h_patch) * osc_fac * std::sqrt(t2);
  }

  rep.local_ratio.resize(n);
  LD nc_tot_sq = 0.0L;
  for (int e = 0; e < n; ++e) {
    nc_tot_sq += nc_sq[e];
    const LD lhs = std::sqrt(nc_sq[e]);
    // V_K: the element's two vertices a = e and a = e + 1.
    const LD rhs = C * (err_patch[e] + err_patch[e + 1]) + osc_patch[e] +
                   osc_patch[e + 1];
    double r;
    if (rhs > 0.0L)
      r = static_cast<double>(lhs / rhs);
    else
      r = lhs == 0.0L ? 0.0 : std::numeric_limits<double>::infinity();
    rep.local_ratio[e] = r;
    rep.max_local_ratio = std::max(rep.max_local_ratio, r);
  }

  const LD err_tot = std::sqrt(err.total_sq);
  const LD nc_tot = std::sqrt(nc_tot_sq);
  if (err_tot > 0.0L)
    rep.global_ratio = static_cast<double>(nc_tot / (2.0L * C * err_tot));
  else
    rep.global_ratio =
        nc_tot == 0.0L ? 0.0 : std::numeric_limits<double>::infinity();
  return rep;
}

} // namespace advest
