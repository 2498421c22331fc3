#pragma once

// Conforming subspaces of a broken polynomial space, expressed as coefficient
// maps into the modal basis. A continuous basis function is stored per
// element as a coefficient column, so bilinear forms assemble elementwise by
// exact linear algebra. Basis: one hat per unpinned vertex, then per-element
// interior bubbles P_m - P_{m-2} (m >= 2), which vanish at both endpoints.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "advest/legendre.hpp"
#include "advest/mesh.hpp"

namespace advest {

enum class PinBC { none, left, right, both };

template <typename S>
struct ContinuousSpace {
  int degree = 1;
  int dim = 0;
  struct Block {
    std::vector<int> dof;  // global indices active on this element
    MatX<S> coef;          // (degree+1) x dof.size()
  };
  std::vector<Block> blocks; // one per element

  // Broken modal coefficients of sum_i u[i] basis_i, element-major.
  VecX<S> to_broken(const VecX<S>& u) const {
    const int bs = degree + 1;
    VecX<S> c = VecX<S>::Zero(static_cast<int>(blocks.size()) * bs);
    for (std::size_t e = 0; e < blocks.size(); ++e) {
      const Block& blk = blocks[e];
      for (std::size_t d = 0; d < blk.dof.size(); ++d)
        c.segment(static_cast<int>(e) * bs, bs) += u[blk.dof[d]] * blk.coef.col(d);
    }
    return c;
  }
};

template <typename S>
ContinuousSpace<S> make_continuous_space(const Mesh1D& mesh, int degree, PinBC pin) {
  if (degree < 0) throw std::invalid_argument("make_continuous_space: negative degree");
  const int n = mesh.n_elements();
  ContinuousSpace<S> sp;
  sp.degree = degree;
  sp.blocks.resize(n);

  if (degree == 0) {
    // Globally constant is the only continuous member; pins exclude it.
    if (pin != PinBC::none) {
      sp.dim = 0;
      for (int e = 0; e < n; ++e) sp.blocks[e].coef.resize(1, 0);
      return sp;
    }
    sp.dim = 1;
    for (int e = 0; e < n; ++e) {
      sp.blocks[e].dof = {0};
      sp.blocks[e].coef.resize(1, 1);
      sp.blocks[e].coef(0, 0) = std::sqrt(S(mesh.h(e)));
    }
    return sp;
  }

  const bool pin_left = pin == PinBC::left || pin == PinBC::both;
  const bool pin_right = pin == PinBC::right || pin == PinBC::both;

  // Vertex DOFs first (ascending, pinned vertices skipped), then bubbles.
  std::vector<int> vdof(mesh.n_vertices(), -1);
  int next = 0;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (v == 0 && pin_left) continue;
    if (v == mesh.n_vertices() - 1 && pin_right) continue;
    vdof[v] = next++;
  }
  const int nbub = degree - 1;
  sp.dim = next + n * nbub;

  for (int e = 0; e < n; ++e) {
    auto& blk = sp.blocks[e];
    const S h = S(mesh.h(e));
    std::vector<std::pair<int, int>> cols; // (global dof, kind): kind 0 left hat, 1 right hat, m>=2 bubble
    if (vdof[e] >= 0) cols.emplace_back(vdof[e], 0);
    if (vdof[e + 1] >= 0) cols.emplace_back(vdof[e + 1], 1);
    for (int m = 2; m <= degree; ++m) cols.emplace_back(next + e * nbub + (m - 2), m);
    blk.coef = MatX<S>::Zero(degree + 1, static_cast<int>(cols.size()));
    blk.dof.resize(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      blk.dof[c] = cols[c].first;
      const int kind = cols[c].second;
      if (kind == 0) { // 1 at left endpoint: (1 - xi)/2
        blk.coef(0, c) = std::sqrt(h) / S(2);
        blk.coef(1, c) = -std::sqrt(h / S(3)) / S(2);
      } else if (kind == 1) { // 1 at right endpoint: (1 + xi)/2
        blk.coef(0, c) = std::sqrt(h) / S(2);
        blk.coef(1, c) = std::sqrt(h / S(3)) / S(2);
      } else { // P_m - P_{m-2}
        blk.coef(kind, c) = std::sqrt(h / S(2 * kind + 1));
        blk.coef(kind - 2, c) = -std::sqrt(h / S(2 * kind - 3));
      }
    }
  }
  return sp;
}

} // namespace advest
