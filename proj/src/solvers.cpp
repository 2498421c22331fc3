#include "advest/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "advest/errors.hpp"
#include "advest/linsolve.hpp"
#include "advest/quadrature.hpp"
#include "advest/spaces.hpp"

namespace advest {

Method parse_method(const std::string& name) {
  if (name == "pg1") return Method::pg1;
  if (name == "pg2") return Method::pg2;
  if (name == "dg") return Method::dg;
  throw ConfigError("unknown method '" + name + "' (expected pg1 | pg2 | dg)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::pg1: return "pg1";
    case Method::pg2: return "pg2";
    case Method::dg: return "dg";
  }
  return "";
}

int min_degree(Method m) {
  switch (m) {
    case Method::pg1: return 2;
    case Method::pg2: return 0;
    case Method::dg: return 1;
  }
  return 0;
}

int dof_count(Method m, int n, int k) {
  return m == Method::pg1 ? n * k : n * (k + 1);
}

namespace {

// Modal coefficients of f on every mesh element, degree `deg` per element.
Eigen::VectorXd source_modal(const BoundSource& bound, const Mesh1D& mesh, int deg) {
  const int q = analytic_quad_order();
  Eigen::VectorXd c(mesh.n_elements() * (deg + 1));
  for (int e = 0; e < mesh.n_elements(); ++e)
    c.segment(e * (deg + 1), deg + 1) =
        bound.modal<double>(e, mesh.x_left(e), mesh.h(e), deg, q);
  return c;
}

} // namespace

BrokenPoly solve_pg1(const AdvectionProblem& prob, const MeshPtr& mesh, int k) {
  if (k < 2) throw std::invalid_argument("solve_pg1: requires k >= 2");
  const Mesh1D& M = *mesh;
  const int n = M.n_elements();
  const double beta = prob.beta;
  const PinBC pin = beta > 0 ? PinBC::left : PinBC::right;
  auto trial = make_continuous_space<double>(M, k, pin);
  const int dim = n * k;
  if (trial.dim != dim) throw std::logic_error("solve_pg1: dimension mismatch");

  BoundSource bound(prob.source, M);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd b = source_modal(bound, M, k - 1);

  // Rows: broken modal test functions of degree k-1, element-major.
  for (int e = 0; e < n; ++e) {
    auto D = legendre::derivative_matrix<double>(k, M.h(e)); // (k) x (k+1)
    Eigen::MatrixXd dcoef = beta * (D * trial.blocks[e].coef); // (k) x ndof
    for (std::size_t c = 0; c < trial.blocks[e].dof.size(); ++c)
      A.block(e * k, trial.blocks[e].dof[c], k, 1) += dcoef.col(c);
  }

  Eigen::VectorXd x = solve_dense_checked<double>(A, b, "solve_pg1");
  VecX<double> broken = trial.to_broken(x);
  return BrokenPoly::from_coefficients(mesh, k, broken);
}

BrokenPoly solve_pg2(const AdvectionProblem& prob, const MeshPtr& mesh, int k) {
  if (k < 0) throw std::invalid_argument("solve_pg2: requires k >= 0");
  const Mesh1D& M = *mesh;
  const int n = M.n_elements();
  const double beta = prob.beta;
  const PinBC pin = beta > 0 ? PinBC::right : PinBC::left;
  auto test = make_continuous_space<double>(M, k + 1, pin);
  const int dim = n * (k + 1);
  if (test.dim != dim) throw std::logic_error("solve_pg2: dimension mismatch");

  BoundSource bound(prob.source, M);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd fm = source_modal(bound, M, k + 1);

  for (int e = 0; e < n; ++e) {
    auto D = legendre::derivative_matrix<double>(k + 1, M.h(e)); // (k+1) x (k+2)
    const auto& blk = test.blocks[e];
    Eigen::MatrixXd dcoef = D * blk.coef; // (k+1) x ndof, modal coeffs of v'
    for (std::size_t c = 0; c < blk.dof.size(); ++c) {
      const int i = blk.dof[c];
      // A(i, (e,j)) = -(phi_j, beta v_i')_K
      A.block(i, e * (k + 1), 1, k + 1) -= beta * dcoef.col(c).transpose();
      b[i] += fm.segment(e * (k + 2), k + 2).dot(blk.coef.col(c));
    }
  }

  Eigen::VectorXd x = solve_dense_checked<double>(A, b, "solve_pg2");
  return BrokenPoly::from_coefficients(mesh, k, x);
}

BrokenPoly solve_dg(const AdvectionProblem& prob, const MeshPtr& mesh, int k) {
  if (k < 1) throw std::invalid_argument("solve_dg: requires k >= 1");
  const Mesh1D& M = *mesh;
  const int n = M.n_elements();
  const int bs = k + 1;
  const double beta = prob.beta;

  BoundSource bound(prob.source, M);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n * bs, n * bs);
  Eigen::VectorXd b = source_modal(bound, M, k);

  // Volume terms: -(phi_s, beta phi_r')_K.
  for (int e = 0; e < n; ++e) {
    auto D = legendre::derivative_matrix<double>(k, M.h(e)); // (k) x (k+1)
    for (int r = 0; r <= k; ++r)
      for (int s = 0; s <= k; ++s)
        if (s < k) A(e * bs + r, e * bs + s) -= beta * D(s, r);
  }

  // Interior vertices: (v+ - v-) * ( a_m u- + a_p u+ ),
  // a_m = -(beta + |beta|)/2, a_p = (|beta| - beta)/2.
  const double am = -(beta + std::abs(beta)) / 2.0;
  const double ap = (std::abs(beta) - beta) / 2.0;
  for (int v = 1; v < n; ++v) {
    const int em = v - 1, ep = v;
    const double hm = M.h(em), hp = M.h(ep);
    for (int r = 0; r <= k; ++r) {
      const double vm = -legendre::trace_right<double>(r, hm); // test from the left, sign -
      const double vp = legendre::trace_left<double>(r, hp);
      for (int s = 0; s <= k; ++s) {
        const double um = legendre::trace_right<double>(s, hm);
        const double up = legendre::trace_left<double>(s, hp);
        A(em * bs + r, em * bs + s) += vm * am * um;
        A(em * bs + r, ep * bs + s) += vm * ap * up;
        A(ep * bs + r, em * bs + s) += vp * am * um;
        A(ep * bs + r, ep * bs + s) += vp * ap * up;
      }
    }
  }

  // Domain boundary: (beta n)_+ u v with n = -1 at the left end, +1 at the right.
  const double cl = std::max(-beta, 0.0);
  const double cr = std::max(beta, 0.0);
  if (cl > 0.0) {
    const double h0 = M.h(0);
    for (int r = 0; r <= k; ++r)
      for (int s = 0; s <= k; ++s)
        A(r, s) += cl * legendre::trace_left<double>(r, h0) *
                   legendre::trace_left<double>(s, h0);
  }
  if (cr > 0.0) {
    const double hn = M.h(n - 1);
    for (int r = 0; r <= k; ++r)
      for (int s = 0; s <= k; ++s)
        A((n - 1) * bs + r, (n - 1) * bs + s) +=
            cr * legendre::trace_right<double>(r, hn) *
            legendre::trace_right<double>(s, hn);
  }

  Eigen::VectorXd x = solve_dense_checked<double>(A, b, "solve_dg");
  return BrokenPoly::from_coefficients(mesh, k, x);
}

BrokenPoly solve(Method m, const AdvectionProblem& prob, const MeshPtr& mesh, int k) {
  switch (m) {
    case Method::pg1: return solve_pg1(prob, mesh, k);
    case Method::pg2: return solve_pg2(prob, mesh, k);
    case Method::dg: return solve_dg(prob, mesh, k);
  }
  throw std::logic_error("solve: bad method");
}

} // namespace advest
