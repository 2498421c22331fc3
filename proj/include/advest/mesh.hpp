#pragma once

#include <memory>
#include <vector>

namespace advest {

enum class VertexClass { interior, inflow, outflow };

enum class Side { left, right };

// Partition of a 1D interval into elements K_e = [x_e, x_{e+1}].
class Mesh1D {
public:
  static Mesh1D uniform(double a, double b, int n);
  // Geometric grading with fixed adjacent ratio h_{e+1}/h_e = ratio.
  static Mesh1D graded(double a, double b, int n, double ratio);
  static Mesh1D from_vertices(std::vector<double> vertices);

  int n_elements() const { return static_cast<int>(h_.size()); }
  int n_vertices() const { return static_cast<int>(v_.size()); }
  double vertex(int i) const { return v_[i]; }
  double x_left(int e) const { return v_[e]; }
  double x_right(int e) const { return v_[e + 1]; }
  double h(int e) const { return h_[e]; }
  double h_max() const;
  double left() const { return v_.front(); }
  double right() const { return v_.back(); }
  double length() const { return right() - left(); }
  // Mesh-shape ratio kappa: max over interior vertices of the larger of the
  // two adjacent width ratios; 1 for a single element.
  double shape_ratio() const { return kappa_; }

  // Element whose closure contains x; ties at interior vertices resolve to
  // the right. Throws std::invalid_argument if x lies outside the domain.
  int find_element(double x) const;
  // True if x coincides exactly with vertex i (sets i).
  bool is_vertex(double x, int& i) const;

  // Every element split into m equal parts. Original vertices are preserved.
  Mesh1D refined(int m) const;
  // Contiguous sub-mesh of `count` elements starting at `first`.
  Mesh1D submesh(int first, int count) const;

private:
  explicit Mesh1D(std::vector<double> v);
  std::vector<double> v_;
  std::vector<double> h_;
  double kappa_ = 1.0;
};

using MeshPtr = std::shared_ptr<const Mesh1D>;

MeshPtr uniform_mesh(double a, double b, int n);
MeshPtr graded_mesh(double a, double b, int n, double ratio);
MeshPtr mesh_from_vertices(std::vector<double> vertices);
MeshPtr refined_mesh(const Mesh1D& mesh, int m);

// Vertex patch omega_a: the one or two elements sharing vertex a.
struct Patch {
  int anchor = 0;
  VertexClass cls = VertexClass::interior;
  int first_element = 0;
  int count = 0;
  double h_patch = 0.0;
};

// Classification depends only on the sign of the velocity: the inflow vertex
// is the left domain endpoint for beta > 0, the right one for beta < 0.
VertexClass classify_vertex(const Mesh1D& mesh, int a, double beta);
std::vector<Patch> vertex_patches(const Mesh1D& mesh, double beta);

// Piecewise-affine hat function psi_a: 1 at vertex a, 0 at the neighboring
// vertices, supported on the patch omega_a. The hats form a partition of
// unity over the domain.
class HatFunction {
public:
  HatFunction(const Mesh1D& mesh, int anchor);
  int anchor() const { return anchor_; }
  int first_element() const { return first_; }
  int count() const { return count_; }
  double operator()(double x) const;
  // d(psi_a)/dx on support element `local` (0-based within the patch).
  double slope(int local) const { return slope_[local]; }
  // psi_a on support element `local` as alpha + gamma*xi in reference
  // coordinates; exact for modal-coefficient products.
  void ref_affine(int local, double& alpha, double& gamma) const {
    alpha = 0.5;
    gamma = gamma_[local];
  }

private:
  int anchor_, first_, count_;
  double xlo_, xa_, xhi_;
  double slope_[2];
  double gamma_[2];
};

HatFunction hat_function(const Mesh1D& mesh, int anchor);

} // namespace advest
