#pragma once

#include <functional>

#include <Eigen/Dense>

#include "advest/legendre.hpp"
#include "advest/mesh.hpp"

namespace advest {

// Piecewise polynomial of uniform degree over a mesh, stored element-major
// in modal Legendre coefficients orthonormal in L2 of each element.
class BrokenPoly {
public:
  BrokenPoly(MeshPtr mesh, int degree);
  static BrokenPoly from_coefficients(MeshPtr mesh, int degree,
                                      Eigen::VectorXd coeffs);

  const MeshPtr& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  int block_size() const { return degree_ + 1; }
  int size() const { return static_cast<int>(c_.size()); }

  const Eigen::VectorXd& coeffs() const { return c_; }
  Eigen::VectorXd& coeffs() { return c_; }
  double coeff(int e, int j) const { return c_[e * block_size() + j]; }
  double& coeff(int e, int j) { return c_[e * block_size() + j]; }
  Eigen::Map<const Eigen::VectorXd> block(int e) const {
    return {c_.data() + e * block_size(), block_size()};
  }

  // One-sided evaluation; `side` resolves which element is used when x is an
  // interior vertex. Domain endpoints always use the single adjacent element.
  double eval(double x, Side side = Side::right) const;

  // Parseval: the L2 norm is the coefficient 2-norm.
  double norm() const { return c_.norm(); }
  double norm(int e) const { return block(e).norm(); }

  BrokenPoly derivative() const;
  // Pad or truncate to degree d; truncation is exact L2 projection.
  BrokenPoly with_degree(int d) const;
  // Exact re-expansion on the m-fold uniform refinement of the same mesh.
  BrokenPoly refine_to(const MeshPtr& fine, int m) const;
  // Coefficients of elements [first, first+count) as a function on a submesh.
  BrokenPoly restrict_to(const MeshPtr& sub, int first, int count) const;

  BrokenPoly& operator+=(const BrokenPoly& o);
  BrokenPoly& operator-=(const BrokenPoly& o);
  BrokenPoly& operator*=(double s) {
    c_ *= s;
    return *this;
  }
  friend BrokenPoly operator+(BrokenPoly a, const BrokenPoly& b) { return a += b; }
  friend BrokenPoly operator-(BrokenPoly a, const BrokenPoly& b) { return a -= b; }
  friend BrokenPoly operator*(double s, BrokenPoly p) { return p *= s; }

private:
  MeshPtr mesh_;
  int degree_;
  Eigen::VectorXd c_;
};

// L2 projection of a callable onto broken P_k, with a q-point Gauss rule per
// element. Exact (up to roundoff) when f is a polynomial of degree <= 2q-1-k.
BrokenPoly project_L2(const std::function<double(double)>& f, MeshPtr mesh,
                      int degree, int q = 15);

// Exact product; the result has degree a.degree() + b.degree().
BrokenPoly multiply(const BrokenPoly& a, const BrokenPoly& b);

// L2 inner product from coefficients (degrees may differ).
double inner_product(const BrokenPoly& a, const BrokenPoly& b);

} // namespace advest
