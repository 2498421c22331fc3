#include "advest/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advest {

Mesh1D::Mesh1D(std::vector<double> v) : v_(std::move(v)) {
  if (v_.size() < 2)
    throw std::invalid_argument("Mesh1D: need at least one element");
  h_.resize(v_.size() - 1);
  for (std::size_t i = 0; i + 1 < v_.size(); ++i) {
    h_[i] = v_[i + 1] - v_[i];
    if (!(h_[i] > 0.0) || !std::isfinite(h_[i]))
      throw std::invalid_argument("Mesh1D: vertices must be strictly increasing");
  }
  kappa_ = 1.0;
  for (std::size_t i = 0; i + 1 < h_.size(); ++i)
    kappa_ = std::max(kappa_, std::max(h_[i + 1] / h_[i], h_[i] / h_[i + 1]));
}

Mesh1D Mesh1D::uniform(double a, double b, int n) {
  if (!(b > a)) throw std::invalid_argument("Mesh1D::uniform: need b > a");
  if (n < 1) throw std::invalid_argument("Mesh1D::uniform: need n >= 1");
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = a + (b - a) * i / n;
  v[0] = a;
  v[n] = b;
  return Mesh1D(std::move(v));
}

Mesh1D Mesh1D::graded(double a, double b, int n, double ratio) {
  if (!(b > a)) throw std::invalid_argument("Mesh1D::graded: need b > a");
  if (n < 1) throw std::invalid_argument("Mesh1D::graded: need n >= 1");
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    throw std::invalid_argument("Mesh1D::graded: ratio must be positive");
  const double L = b - a;
  // Geometric series: h_0 (1 + r + ... + r^{n-1}) = L.
  double h0;
  if (ratio == 1.0)
    h0 = L / n;
  else
    h0 = L * (1.0 - ratio) / (1.0 - std::pow(ratio, n));
  std::vector<double> v(n + 1);
  v[0] = a;
  double h = h0;
  for (int i = 1; i <= n; ++i) {
    v[i] = v[i - 1] + h;
    h *= ratio;
  }
  v[n] = b;
  return Mesh1D(std::move(v));
}

Mesh1D Mesh1D::from_vertices(std::vector<double> vertices) {
  return Mesh1D(std::move(vertices));
}

double Mesh1D::h_max() const { return *std::max_element(h_.begin(), h_.end()); }

int Mesh1D::find_element(double x) const {
  if (x < left() || x > right())
    throw std::invalid_argument("Mesh1D::find_element: x outside the domain");
  auto it = std::upper_bound(v_.begin(), v_.end(), x);
  int e = static_cast<int>(it - v_.begin()) - 1;
  return std::min(std::max(e, 0), n_elements() - 1);
}

bool Mesh1D::is_vertex(double x, int& i) const {
  auto it = std::lower_bound(v_.begin(), v_.end(), x);
  if (it != v_.end() && *it == x) {
    i = static_cast<int>(it - v_.begin());
    return true;
  }
  return false;
}

Mesh1D Mesh1D::refined(int m) const {
  if (m < 1) throw std::invalid_argument("Mesh1D::refined: need m >= 1");
  std::vector<double> v;
  v.reserve(n_elements() * m + 1);
  for (int e = 0; e < n_elements(); ++e) {
    v.push_back(v_[e]);
    for (int j = 1; j < m; ++j) v.push_back(v_[e] + h_[e] * j / m);
  }
  v.push_back(v_.back());
  return Mesh1D(std::move(v));
}

Mesh1D Mesh1D::submesh(int first, int count) const {
  if (first < 0 || count < 1 || first + count > n_elements())
    throw std::invalid_argument("Mesh1D::submesh: bad element range");
  std::vector<double> v(v_.begin() + first, v_.begin() + first + count + 1);
  return Mesh1D(std::move(v));
}

MeshPtr uniform_mesh(double a, double b, int n) {
  return std::make_shared<const Mesh1D>(Mesh1D::uniform(a, b, n));
}
MeshPtr graded_mesh(double a, double b, int n, double ratio) {
  return std::make_shared<const Mesh1D>(Mesh1D::graded(a, b, n, ratio));
}
MeshPtr mesh_from_vertices(std::vector<double> vertices) {
  return std::make_shared<const Mesh1D>(Mesh1D::from_vertices(std::move(vertices)));
}
MeshPtr refined_mesh(const Mesh1D& mesh, int m) {
  return std::make_shared<const Mesh1D>(mesh.refined(m));
}

VertexClass classify_vertex(const Mesh1D& mesh, int a, double beta) {
  if (beta == 0.0 || !std::isfinite(beta))
    throw std::invalid_argument("classify_vertex: velocity must be nonzero");
  if (a < 0 || a >= mesh.n_vertices())
    throw std::invalid_argument("classify_vertex: bad vertex index");
  const int inflow = beta > 0 ? 0 : mesh.n_vertices() - 1;
  const int outflow = beta > 0 ? mesh.n_vertices() - 1 : 0;
  if (a == inflow) return VertexClass::inflow;
  if (a == outflow) return VertexClass::outflow;
  return VertexClass::interior;
}

std::vector<Patch> vertex_patches(const Mesh1D& mesh, double beta) {
  std::vector<Patch> out(mesh.n_vertices());
  for (int a = 0; a < mesh.n_vertices(); ++a) {
    Patch& p = out[a];
    p.anchor = a;
    p.cls = classify_vertex(mesh, a, beta);
    p.first_element = std::max(a - 1, 0);
    const int last = std::min(a, mesh.n_elements() - 1);
    p.count = last - p.first_element + 1;
    p.h_patch = mesh.vertex(last + 1) - mesh.vertex(p.first_element);
  }
  return out;
}

HatFunction::HatFunction(const Mesh1D& mesh, int anchor) : anchor_(anchor) {
  if (anchor < 0 || anchor >= mesh.n_vertices())
    throw std::invalid_argument("HatFunction: bad vertex index");
  first_ = std::max(anchor - 1, 0);
  const int last = std::min(anchor, mesh.n_elements() - 1);
  count_ = last - first_ + 1;
  xa_ = mesh.vertex(anchor);
  xlo_ = mesh.vertex(first_);
  xhi_ = mesh.vertex(last + 1);
  int local = 0;
  if (anchor > 0) {
    // Element left of the anchor: rises from 0 to 1.
    slope_[local] = 1.0 / mesh.h(anchor - 1);
    gamma_[local] = 0.5;
    ++local;
  }
  if (anchor < mesh.n_vertices() - 1) {
    slope_[local] = -1.0 / mesh.h(anchor);
    gamma_[local] = -0.5;
  }
}

double HatFunction::operator()(double x) const {
  if (x <= xlo_ || x >= xhi_) {
    // Boundary anchors keep value 1 at their own endpoint.
    if (x == xa_) return 1.0;
    return 0.0;
  }
  if (x <= xa_) return xa_ == xlo_ ? 1.0 : (x - xlo_) / (xa_ - xlo_);
  return xa_ == xhi_ ? 1.0 : (xhi_ - x) / (xhi_ - xa_);
}

HatFunction hat_function(const Mesh1D& mesh, int anchor) {
  return HatFunction(mesh, anchor);
}

} // namespace advest
