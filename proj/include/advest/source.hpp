#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "advest/legendre.hpp"
#include "advest/mesh.hpp"

namespace advest {

// Right-hand side f of beta u' = f. A source may be a global analytic
// function, a global polynomial, or a per-element polynomial (the built-in
// demo source adds a per-element constant sin(2 pi x_left) to x^2 + x, so it
// is mesh-bound: values depend on which element of the *problem* mesh
// contains x, not on any finer evaluation mesh).
class SourceTerm {
public:
  enum class Kind { arctan, polynomial, cell_sine_quadratic, callable };

  // f(x) = arctan(x); the exact solution has the closed-form antiderivative.
  static SourceTerm arctan_source();
  // f(x) = sum_i coeffs[i] x^i.
  static SourceTerm polynomial(std::vector<double> coeffs);
  // f(x) = x^2 + x + sin(2 pi x_{e,left}) on each element e. CLI spec "table81".
  static SourceTerm cell_sine_quadratic();
  static SourceTerm make_callable(std::function<double(double)> f,
                                  std::function<double(double)> antiderivative = {});

  Kind kind() const { return kind_; }
  // True when f restricted to each bind-mesh element is a polynomial whose
  // modal representation is exact.
  bool piecewise_polynomial() const { return kind_ != Kind::arctan && kind_ != Kind::callable; }
  int broken_degree() const;
  bool antiderivative_available() const;

  double eval(const Mesh1D& bind, double x) const;

  // Canonical spec string: "arctan", "table81", "poly:c0,c1,...".
  std::string spec() const;
  static SourceTerm parse(const std::string& spec);

  const std::vector<double>& poly_coeffs() const { return poly_; }
  const std::function<double(double)>& fn() const { return fn_; }
  const std::function<double(double)>& fn_antiderivative() const { return fn_anti_; }

private:
  SourceTerm() = default;
  Kind kind_ = Kind::polynomial;
  std::vector<double> poly_;
  std::function<double(double)> fn_;
  std::function<double(double)> fn_anti_;
};

// Source bound to a problem mesh: per-element constants and vertex values of
// the antiderivative are fixed once, so repeated evaluation is O(log n).
// Holds its own copy of the source term; the mesh must outlive the binding.
class BoundSource {
public:
  BoundSource(const SourceTerm& src, const Mesh1D& bind);

  const SourceTerm& source() const { return src_; }
  const Mesh1D& mesh() const { return *bind_; }

  long double f(long double x) const;
  // F(x) = int_{left}^{x} f, in extended precision.
  long double F(long double x) const;
  bool antiderivative_available() const { return src_.antiderivative_available(); }

  // Modal coefficients of f on the interval [xl, xl+h], which must lie inside
  // bind element be. Exact for piecewise-polynomial kinds; q-point Gauss
  // quadrature otherwise.
  template <typename S>
  VecX<S> modal(int be, S xl, S h, int degree, int q_analytic) const;

  // Per-element constant for the cell_sine kind (0 for other kinds).
  long double cell_constant(int be) const { return cell_c_.empty() ? 0.0L : cell_c_[be]; }

private:
  long double f_local(int be, long double x) const;
  // Antiderivative of the element-local polynomial part, zero constant.
  long double prim_local(int be, long double x) const;

  SourceTerm src_;
  const Mesh1D* bind_;
  std::vector<long double> cell_c_; // cell_sine constants
  std::vector<long double> Fv_;     // F at vertices, Fv_[0] = 0
};

// beta u' = f on the mesh interval, u = 0 at the inflow end (left for
// beta > 0, right for beta < 0).
struct AdvectionProblem {
  double beta = 1.0;
  SourceTerm source;

  AdvectionProblem(double beta_, SourceTerm source_);

  bool exact_solution_available() const { return source.antiderivative_available(); }
  // u(x) = (F(x) - F(x_inflow)) / beta via a bound source.
  long double exact_u(const BoundSource& bound, long double x) const;
};

} // namespace advest
