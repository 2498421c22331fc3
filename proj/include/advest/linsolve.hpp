#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "advest/errors.hpp"
#include "advest/legendre.hpp"

namespace advest {

// Dense LU solve with an a posteriori residual check:
// |Ax - b| <= tol (|A| |x| + |b|) in the Frobenius/2-norm pair.
template <typename S>
VecX<S> solve_dense_checked(const MatX<S>& A, const VecX<S>& b,
                            const std::string& what, double tol = 1e-10,
                            double* residual_out = nullptr) {
  using W = long double; // residual accumulation precision
  Eigen::PartialPivLU<MatX<S>> lu(A);
  VecX<S> x = lu.solve(b);
  const MatX<W> Aw = A.template cast<W>();
  const VecX<W> bw = b.template cast<W>();
  // Iterative refinement with an extended-precision residual: the beta/h
  // scaling of the assembled systems otherwise leaks into the hat-residual
  // identities on fine meshes.
  double resid = 0.0;
  for (int pass = 0;; ++pass) {
    const VecX<W> r = bw - Aw * x.template cast<W>();
    resid = static_cast<double>(r.norm());
    if (pass == 2 || !std::isfinite(resid)) break;
    const double xn = static_cast<double>(x.template cast<W>().norm());
    if (resid <= 1e-17 * (static_cast<double>(Aw.norm()) * xn +
                          static_cast<double>(bw.norm())))
      break;
    x += lu.solve(r.template cast<S>());
  }
  const double scale =
      static_cast<double>(A.norm()) * static_cast<double>(x.norm()) +
      static_cast<double>(b.norm());
  if (residual_out) *residual_out = resid;
  if (!std::isfinite(resid) || resid > tol * (scale > 0 ? scale : 1.0))
    throw SolverFailure(what + ": dense solve residual " + std::to_string(resid) +
                        " exceeds tolerance");
  return x;
}

// Cholesky variant for SPD Gram/stiffness matrices, same residual contract.
template <typename S>
VecX<S> solve_spd_checked(const MatX<S>& A, const VecX<S>& b,
                          const std::string& what, double tol = 1e-10) {
  using W = long double;
  Eigen::LLT<MatX<S>> llt(A);
  if (llt.info() != Eigen::Success)
    throw SolverFailure(what + ": matrix not SPD");
  VecX<S> x = llt.solve(b);
  {
    const VecX<W> r =
        b.template cast<W>() - A.template cast<W>() * x.template cast<W>();
    x += llt.solve(r.template cast<S>());
  }
  const double resid = static_cast<double>((A * x - b).norm());
  const double scale =
      static_cast<double>(A.norm()) * static_cast<double>(x.norm()) +
      static_cast<double>(b.norm());
  if (!std::isfinite(resid) || resid > tol * (scale > 0 ? scale : 1.0))
    throw SolverFailure(what + ": SPD solve residual " + std::to_string(resid) +
                        " exceeds tolerance");
  return x;
}

// Named dense system, kept around where callers want to inspect A and b.
struct LinearSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double last_residual = 0.0;
  Eigen::VectorXd solve(const std::string& what = "LinearSystem",
                        double tol = 1e-10) {
    return solve_dense_checked<double>(A, b, what, tol, &last_residual);
  }
};

} // namespace advest
