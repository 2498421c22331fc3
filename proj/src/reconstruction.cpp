#include "advest/reconstruction.hpp"

#include <algorithm>
#include <cmath>

#include "advest/errors.hpp"
#include "advest/linsolve.hpp"
#include "advest/quadrature.hpp"
#include "advest/residual.hpp"
#include "advest/spaces.hpp"

namespace advest {

namespace detail {

namespace {

using LD = long double;

// (f psi, phi_r)_K for r = 0..deg on bind element be, where psi is
// alpha + gamma*xi. Exact for piecewise-polynomial sources.
VecX<LD> f_hat_modal(const BoundSource& bound, int be, LD xl, LD h, LD alpha,
                     LD gamma, int deg) {
  if (bound.source().piecewise_polynomial()) {
    const int d = bound.source().broken_degree();
    VecX<LD> fm = bound.modal<LD>(be, xl, h, d, 0);
    VecX<LD> prod = legendre::affine_multiply<LD>(fm, alpha, gamma); // deg d+1
    VecX<LD> out = VecX<LD>::Zero(deg + 1);
    for (int r = 0; r <= std::min(deg, d + 1); ++r) out[r] = prod[r];
    return out;
  }
  const int q = analytic_quad_order();
  const auto& nodes = gauss_nodes_ld(q);
  const auto& weights = gauss_weights_ld(q);
  std::vector<LD> nv(nodes.begin(), nodes.end());
  std::vector<LD> wv(weights.begin(), weights.end());
  std::vector<LD> vals(q);
  for (int p = 0; p < q; ++p) {
    const LD x = xl + h * (nv[p] + 1.0L) / 2.0L;
    vals[p] = bound.f(x) * (alpha + gamma * nv[p]);
  }
  return legendre::project_values<LD>(deg, h, nv, wv, vals);
}

// |f|_{K} used in diagnostic scales.
LD f_norm(const BoundSource& bound, int be, LD xl, LD h) {
  if (bound.source().piecewise_polynomial())
    return bound.modal<LD>(be, xl, h, bound.source().broken_degree(), 0).norm();
  const int q = analytic_quad_order();
  const auto& nodes = gauss_nodes_ld(q);
  const auto& weights = gauss_weights_ld(q);
  LD s = 0.0L;
  for (int p = 0; p < q; ++p) {
    const LD fx = bound.f(xl + h * (nodes[p] + 1.0L) / 2.0L);
    s += weights[p] * h / 2.0L * fx * fx;
  }
  return std::sqrt(s);
}

struct PatchWork {
  VecX<LD> s_broken;  // broken P_k' coefficients of s_a on patch elements
  PatchReconstruction diag;
};

PatchWork solve_patch_core(const Patch& p, const HatFunction& psi,
                           const BrokenPoly& u_h, const AdvectionProblem& prob,
                           const BoundSource& bound, int kprime) {
  const Mesh1D& M = *u_h.mesh();
  const LD beta = prob.beta;
  const int bs = kprime + 1;
  Mesh1D sub = M.submesh(p.first_element, p.count);
  auto trial = make_continuous_space<LD>(sub, kprime, PinBC::none);

  // Retained test rows: everything, except that interior patches drop the
  // constant on the downwind element (the retained set then spans a
  // complement of the global constant).
  const bool interior = p.cls == VertexClass::interior;
  const int down_local =
      interior ? (prob.beta > 0 ? 1 : 0) : -1; // downwind element of the pair
  std::vector<int> rows; // (local element, mode) flattened as l*bs + r
  for (int l = 0; l < p.count; ++l)
    for (int r = 0; r <= kprime; ++r)
      if (!(l == down_local && r == 0)) rows.push_back(l * bs + r);

  const int dim = trial.dim;
  if (static_cast<int>(rows.size()) != dim)
    throw std::logic_error("solve_patch: retained rows mismatch trial dimension");

  MatX<LD> A = MatX<LD>::Zero(dim, dim);
  VecX<LD> b = VecX<LD>::Zero(dim);
  std::vector<int> row_of(p.count * bs, -1);
  for (int i = 0; i < dim; ++i) row_of[rows[i]] = i;

  // RHS pieces per element, kept for the dropped-equation check.
  VecX<LD> rhs_all = VecX<LD>::Zero(p.count * bs);
  for (int l = 0; l < p.count; ++l) {
    const int e = p.first_element + l;
    const LD h = M.h(e), xl = M.x_left(e);
    double alpha_d, gamma_d;
    psi.ref_affine(l, alpha_d, gamma_d);
    const LD alpha = alpha_d, gamma = gamma_d;
    VecX<LD> fh = f_hat_modal(bound, e, xl, h, alpha, gamma, kprime);
    for (int r = 0; r <= kprime; ++r) {
      LD v = fh[r];
      if (r <= u_h.degree())
        v += beta * (LD)psi.slope(l) * (LD)u_h.coeff(e, r);
      rhs_all[l * bs + r] = v;
      if (row_of[l * bs + r] >= 0) b[row_of[l * bs + r]] = v;
    }
  }

  // Matrix: columns are trial basis functions, rows the retained modes of
  // beta (psi_a s)'.
  std::vector<MatX<LD>> dprod(p.count); // (k'+1) x dim modal coeffs per element
  for (int l = 0; l < p.count; ++l) {
    const int e = p.first_element + l;
    const LD h = M.h(e);
    double alpha_d, gamma_d;
    psi.ref_affine(l, alpha_d, gamma_d);
    auto D = legendre::derivative_matrix<LD>(kprime + 1, h); // (k'+1) x (k'+2)
    const auto& blk = trial.blocks[l];
    dprod[l] = MatX<LD>::Zero(bs, dim);
    for (std::size_t c = 0; c < blk.dof.size(); ++c) {
      VecX<LD> prod = legendre::affine_multiply<LD>(
          VecX<LD>(blk.coef.col(c)), (LD)alpha_d, (LD)gamma_d);
      dprod[l].col(blk.dof[c]) = beta * (D * prod);
    }
    for (int r = 0; r <= kprime; ++r)
      if (row_of[l * bs + r] >= 0) A.row(row_of[l * bs + r]) = dprod[l].row(r);
  }

  double solve_resid = 0.0;
  VecX<LD> z = solve_dense_checked<LD>(A, b, "solve_patch", 1e-10, &solve_resid);

  PatchWork out;
  out.s_broken = trial.to_broken(z);
  out.diag.patch = p;
  out.diag.kprime = kprime;
  out.diag.solve_residual = solve_resid;

  // Scales for the diagnostics.
  LD fpatch2 = 0.0L, upatch2 = 0.0L, spatch2 = out.s_broken.squaredNorm();
  for (int l = 0; l < p.count; ++l) {
    const int e = p.first_element + l;
    const LD fn = f_norm(bound, e, M.x_left(e), M.h(e));
    fpatch2 += fn * fn;
    upatch2 += (LD)u_h.block(e).squaredNorm();
  }
  const LD denom = (LD)p.h_patch * std::sqrt(fpatch2) + std::sqrt(upatch2);
  out.diag.stability_ratio =
      denom > 0.0L ? (double)(std::sqrt(spatch2) / denom) : 0.0;

  if (interior) {
    // Dropped equation: (beta (psi s)', 1) - (f psi + beta psi' u_h, 1) = 0.
    LD defect = 0.0L;
    for (int l = 0; l < p.count; ++l) {
      const int e = p.first_element + l;
      const LD sqh = std::sqrt((LD)M.h(e));
      defect += sqh * (dprod[l].row(0).dot(z) - rhs_all[l * bs]);
    }
    out.diag.constant_test_residual = (double)defect;
  }
  if (p.cls == VertexClass::inflow) {
    const int l = 0; // single-element patch
    const int e = p.first_element;
    const LD h = M.h(e);
    LD val = 0.0L;
    for (int j = 0; j <= kprime; ++j) {
      const LD tr = prob.beta > 0 ? legendre::trace_left<LD>(j, h)
                                  : legendre::trace_right<LD>(j, h);
      val += out.s_broken[l * bs + j] * tr;
    }
    out.diag.inflow_value = (double)val;
  }
  out.diag.coeffs.resize(out.s_broken.size());
  for (int i = 0; i < out.s_broken.size(); ++i)
    out.diag.coeffs[i] = (double)out.s_broken[i];
  return out;
}

} // namespace

ReconCore reconstruct_core(const BrokenPoly& u_h, const AdvectionProblem& prob,
                           const BoundSource& bound, int kprime,
                           bool enforce_orthogonality) {
  if (kprime < 0) throw std::invalid_argument("reconstruct: kprime >= 0 required");
  const Mesh1D& M = *u_h.mesh();
  const int n = M.n_elements();
  const int sbs = kprime + 2; // s_h degree k'+1

  ReconCore core;
  core.kprime = kprime;
  core.s = VecX<LD>::Zero(n * sbs);

  auto hats = check_hat_orthogonality(u_h, prob);
  core.max_orthogonality_ratio = hats.max_ratio;
  core.orthogonality_ok = hats.pass();
  if (enforce_orthogonality && !core.orthogonality_ok)
    throw PreconditionViolated(
        "reconstruct: hat orthogonality violated (max ratio " +
            std::to_string(hats.max_ratio) + ")",
        hats.max_ratio);

  std::vector<double> hat_resid(M.n_vertices(), 0.0);
  for (std::size_t i = 0; i < hats.anchor.size(); ++i)
    hat_resid[hats.anchor[i]] = hats.value[i];

  auto patches = vertex_patches(M, prob.beta);
  core.patches.reserve(patches.size());
  for (const Patch& p : patches) {
    HatFunction psi(M, p.anchor);
    PatchWork w = solve_patch_core(p, psi, u_h, prob, bound, kprime);
    w.diag.hat_residual = hat_resid[p.anchor];
    // Accumulate psi_a * s_a into the global degree-(k'+1) coefficients.
    for (int l = 0; l < p.count; ++l) {
      const int e = p.first_element + l;
      double alpha_d, gamma_d;
      psi.ref_affine(l, alpha_d, gamma_d);
      VecX<LD> block = w.s_broken.segment(l * (kprime + 1), kprime + 1);
      VecX<LD> prod =
          legendre::affine_multiply<LD>(block, (LD)alpha_d, (LD)gamma_d);
      core.s.segment(e * sbs, sbs) += prod;
    }
    core.patches.push_back(std::move(w.diag));
  }

  // Invariant diagnostics.
  LD max_jump = 0.0L;
  for (int v = 1; v < M.n_vertices() - 1; ++v) {
    const int em = v - 1, ep = v;
    LD lv = 0.0L, rv = 0.0L, scale = 0.0L;
    for (int j = 0; j < sbs; ++j) {
      const LD tl = legendre::trace_right<LD>(j, (LD)M.h(em));
      const LD tr = legendre::trace_left<LD>(j, (LD)M.h(ep));
      lv += core.s[em * sbs + j] * tl;
      rv += core.s[ep * sbs + j] * tr;
      scale += std::abs(core.s[em * sbs + j] * tl) +
               std::abs(core.s[ep * sbs + j] * tr);
    }
    if (scale < 1e-300L) scale = 1.0L;
    max_jump = std::max(max_jump, std::abs(lv - rv) / scale);
  }
  core.max_vertex_jump_rel = max_jump;

  {
    const int e = prob.beta > 0 ? 0 : n - 1;
    LD val = 0.0L, scale = 0.0L;
    for (int j = 0; j < sbs; ++j) {
      const LD tr = prob.beta > 0 ? legendre::trace_left<LD>(j, (LD)M.h(e))
                                  : legendre::trace_right<LD>(j, (LD)M.h(e));
      val += core.s[e * sbs + j] * tr;
      scale += std::abs(core.s[e * sbs + j] * tr);
    }
    if (scale < 1e-300L) scale = 1.0L;
    core.inflow_value_rel = std::abs(val) / scale;
  }

  {
    LD defect2 = 0.0L, scale2 = 0.0L;
    for (int e = 0; e < n; ++e) {
      const LD h = M.h(e);
      auto D = legendre::derivative_matrix<LD>(kprime + 1, h);
      VecX<LD> ds = (LD)prob.beta * (D * core.s.segment(e * sbs, sbs));
      VecX<LD> fm = bound.source().piecewise_polynomial()
                        ? [&] {
                            VecX<LD> full = bound.modal<LD>(
                                e, (LD)M.x_left(e), h,
                                bound.source().broken_degree(), 0);
                            VecX<LD> t = VecX<LD>::Zero(kprime + 1);
                            for (int j = 0;
                                 j <= std::min(kprime, (int)full.size() - 1); ++j)
                              t[j] = full[j];
                            return t;
                          }()
                        : bound.modal<LD>(e, (LD)M.x_left(e), h, kprime,
                                          analytic_quad_order());
      defect2 += (ds - fm).squaredNorm();
      scale2 += fm.squaredNorm() + ds.squaredNorm();
    }
    if (scale2 < 1e-300L) scale2 = 1.0L;
    core.projection_defect_rel = std::sqrt(defect2 / scale2);
  }

  return core;
}

} // namespace detail

PatchReconstruction solve_patch(int anchor, const BrokenPoly& u_h,
                                const AdvectionProblem& prob, int kprime) {
  if (kprime < 0) throw std::invalid_argument("solve_patch: kprime >= 0 required");
  const Mesh1D& M = *u_h.mesh();
  if (anchor < 0 || anchor >= M.n_vertices())
    throw std::invalid_argument("solve_patch: bad vertex index");
  BoundSource bound(prob.source, M);
  auto patches = vertex_patches(M, prob.beta);
  const Patch& p = patches[anchor];

  double r_a = 0.0;
  if (p.cls != VertexClass::outflow) {
    auto hats = check_hat_orthogonality(u_h, prob);
    for (std::size_t i = 0; i < hats.anchor.size(); ++i) {
      if (hats.anchor[i] != anchor) continue;
      r_a = hats.value[i];
      const double tol = 1e-11 * (hats.scale[i] > 0 ? hats.scale[i] : 1.0);
      if (std::abs(r_a) > tol)
        throw PreconditionViolated(
            "solve_patch: hat orthogonality violated at vertex " +
                std::to_string(anchor) + " (r_a = " + std::to_string(r_a) + ")",
            r_a);
    }
  }

  HatFunction psi(M, anchor);
  auto w = detail::solve_patch_core(p, psi, u_h, prob, bound, kprime);
  w.diag.hat_residual = r_a;
  return w.diag;
}

Reconstruction assemble_global(const BrokenPoly& u_h,
                               const AdvectionProblem& prob, int kprime) {
  const Mesh1D& M = *u_h.mesh();
  BoundSource bound(prob.source, M);
  auto core = detail::reconstruct_core(u_h, prob, bound, kprime, true);

  Eigen::VectorXd s(core.s.size());
  for (int i = 0; i < core.s.size(); ++i) s[i] = (double)core.s[i];
  Reconstruction rec{BrokenPoly::from_coefficients(u_h.mesh(), kprime + 1, s),
                     kprime,
                     std::move(core.patches),
                     (double)core.max_vertex_jump_rel,
                     (double)core.inflow_value_rel,
                     (double)core.projection_defect_rel};

  const double tol = 1e-10;
  if (rec.max_vertex_jump_rel > tol || rec.inflow_value_rel > tol ||
      rec.projection_defect_rel > tol)
    throw SolverFailure("assemble_global: reconstruction invariants violated");
  (void)M;
  return rec;
}

} // namespace advest
