#include "advest/broken_poly.hpp"

#include <algorithm>
#include <stdexcept>

#include "advest/quadrature.hpp"

namespace advest {

BrokenPoly::BrokenPoly(MeshPtr mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (!mesh_) throw std::invalid_argument("BrokenPoly: null mesh");
  if (degree_ < 0) throw std::invalid_argument("BrokenPoly: negative degree");
  c_ = Eigen::VectorXd::Zero(mesh_->n_elements() * (degree_ + 1));
}

BrokenPoly BrokenPoly::from_coefficients(MeshPtr mesh, int degree,
                                         Eigen::VectorXd coeffs) {
  BrokenPoly p(std::move(mesh), degree);
  if (coeffs.size() != p.c_.size())
    throw std::invalid_argument("BrokenPoly: coefficient size mismatch");
  p.c_ = std::move(coeffs);
  return p;
}

double BrokenPoly::eval(double x, Side side) const {
  const Mesh1D& m = *mesh_;
  int e;
  int v;
  if (m.is_vertex(x, v)) {
    e = (side == Side::left) ? v - 1 : v;
    e = std::clamp(e, 0, m.n_elements() - 1);
  } else {
    e = m.find_element(x);
  }
  const double h = m.h(e);
  const double xi = 2.0 * (x - m.x_left(e)) / h - 1.0;
  std::vector<double> phi(degree_ + 1);
  legendre::phi_values<double>(degree_, h, xi, phi.data());
  double s = 0.0;
  for (int j = 0; j <= degree_; ++j) s += coeff(e, j) * phi[j];
  return s;
}

BrokenPoly BrokenPoly::derivative() const {
  const int dout = degree_ >= 1 ? degree_ - 1 : 0;
  BrokenPoly d(mesh_, dout);
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    auto D = legendre::derivative_matrix<double>(degree_, mesh_->h(e));
    Eigen::VectorXd b = D * block(e);
    for (int j = 0; j <= dout; ++j) d.coeff(e, j) = b[j];
  }
  return d;
}

BrokenPoly BrokenPoly::with_degree(int d) const {
  if (d == degree_) return *this;
  BrokenPoly out(mesh_, d);
  const int keep = std::min(d, degree_) + 1;
  for (int e = 0; e < mesh_->n_elements(); ++e)
    for (int j = 0; j < keep; ++j) out.coeff(e, j) = coeff(e, j);
  return out;
}

BrokenPoly BrokenPoly::refine_to(const MeshPtr& fine, int m) const {
  if (!fine || fine->n_elements() != mesh_->n_elements() * m)
    throw std::invalid_argument("BrokenPoly::refine_to: mesh is not an m-fold refinement");
  BrokenPoly out(fine, degree_);
  const auto& rule = gauss_rule(degree_ + 1);
  std::vector<double> vals(rule.order());
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    for (int s = 0; s < m; ++s) {
      const int ef = e * m + s;
      const double hs = fine->h(ef);
      const double xl = fine->x_left(ef);
      for (int p = 0; p < rule.order(); ++p)
        vals[p] = eval(xl + hs * (rule.nodes[p] + 1.0) / 2.0);
      auto c = legendre::project_values<double>(degree_, hs, rule.nodes,
                                                rule.weights, vals);
      for (int j = 0; j <= degree_; ++j) out.coeff(ef, j) = c[j];
    }
  }
  return out;
}

BrokenPoly BrokenPoly::restrict_to(const MeshPtr& sub, int first, int count) const {
  if (!sub || sub->n_elements() != count)
    throw std::invalid_argument("BrokenPoly::restrict_to: submesh size mismatch");
  BrokenPoly out(sub, degree_);
  for (int e = 0; e < count; ++e)
    for (int j = 0; j <= degree_; ++j) out.coeff(e, j) = coeff(first + e, j);
  return out;
}

BrokenPoly& BrokenPoly::operator+=(const BrokenPoly& o) {
  if (o.degree_ > degree_) *this = with_degree(o.degree_);
  for (int e = 0; e < mesh_->n_elements(); ++e)
    for (int j = 0; j <= o.degree_; ++j) coeff(e, j) += o.coeff(e, j);
  return *this;
}

BrokenPoly& BrokenPoly::operator-=(const BrokenPoly& o) {
  if (o.degree_ > degree_) *this = with_degree(o.degree_);
  for (int e = 0; e < mesh_->n_elements(); ++e)
    for (int j = 0; j <= o.degree_; ++j) coeff(e, j) -= o.coeff(e, j);
  return *this;
}

BrokenPoly project_L2(const std::function<double(double)>& f, MeshPtr mesh,
                      int degree, int q) {
  BrokenPoly out(mesh, degree);
  const auto& rule = gauss_rule(q);
  std::vector<double> vals(rule.order());
  for (int e = 0; e < mesh->n_elements(); ++e) {
    const double h = mesh->h(e);
    const double xl = mesh->x_left(e);
    for (int p = 0; p < rule.order(); ++p)
      vals[p] = f(xl + h * (rule.nodes[p] + 1.0) / 2.0);
    auto c = legendre::project_values<double>(degree, h, rule.nodes,
                                              rule.weights, vals);
    for (int j = 0; j <= degree; ++j) out.coeff(e, j) = c[j];
  }
  return out;
}

BrokenPoly multiply(const BrokenPoly& a, const BrokenPoly& b) {
  if (a.mesh()->n_elements() != b.mesh()->n_elements())
    throw std::invalid_argument("multiply: mesh mismatch");
  const int dout = a.degree() + b.degree();
  const int q = dout + 1; // integrand degree 2*dout <= 2q-1
  const auto& rule = gauss_rule(q);
  MeshPtr mesh = a.mesh();
  BrokenPoly out(mesh, dout);
  std::vector<double> vals(rule.order());
  for (int e = 0; e < mesh->n_elements(); ++e) {
    const double h = mesh->h(e);
    const double xl = mesh->x_left(e);
    for (int p = 0; p < rule.order(); ++p) {
      const double x = xl + h * (rule.nodes[p] + 1.0) / 2.0;
      vals[p] = a.eval(x) * b.eval(x);
    }
    auto c = legendre::project_values<double>(dout, h, rule.nodes, rule.weights,
                                              vals);
    for (int j = 0; j <= dout; ++j) out.coeff(e, j) = c[j];
  }
  return out;
}

double inner_product(const BrokenPoly& a, const BrokenPoly& b) {
  const int deg = std::min(a.degree(), b.degree());
  double s = 0.0;
  for (int e = 0; e < a.mesh()->n_elements(); ++e)
    for (int j = 0; j <= deg; ++j) s += a.coeff(e, j) * b.coeff(e, j);
  return s;
}

} // namespace advest
