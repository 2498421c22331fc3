#pragma once

// Reference-element utilities for the modal Legendre basis.
//
// On an element K of width h the basis is phi_j(x) = sqrt((2j+1)/h) P_j(xi),
// xi the affine pullback to [-1,1]. The basis is orthonormal in L2(K), so
// coefficient dot products are L2 inner products and truncation is exact
// L2 projection onto the lower degree.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace advest {

template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

namespace legendre {

// P_0..P_deg at xi by the three-term recurrence.
template <typename S>
inline void values(int deg, S xi, S* out) {
  out[0] = S(1);
  if (deg == 0) return;
  out[1] = xi;
  for (int j = 2; j <= deg; ++j)
    out[j] = ((2 * j - 1) * xi * out[j - 1] - (j - 1) * out[j - 2]) / S(j);
}

// Orthonormal basis values phi_0..phi_deg at xi on an element of width h.
template <typename S>
inline void phi_values(int deg, S h, S xi, S* out) {
  values(deg, xi, out);
  for (int j = 0; j <= deg; ++j) out[j] *= std::sqrt(S(2 * j + 1) / h);
}

// One-sided endpoint traces: phi_j(right) and phi_j(left) = (-1)^j phi_j(right).
template <typename S>
inline S trace_right(int j, S h) {
  return std::sqrt(S(2 * j + 1) / h);
}
template <typename S>
inline S trace_left(int j, S h) {
  S t = trace_right(j, h);
  return (j % 2 == 0) ? t : -t;
}

// d/dx in modal coordinates: (deg) x (deg+1) unless deg = 0 where the
// derivative is the zero constant, returned as 1 x 1.
// D(i,j) = (2/h) sqrt((2i+1)(2j+1)) for i < j, i + j odd; else 0.
template <typename S>
inline MatX<S> derivative_matrix(int deg, S h) {
  const int rows = deg >= 1 ? deg : 1;
  MatX<S> D = MatX<S>::Zero(rows, deg + 1);
  for (int j = 1; j <= deg; ++j)
    for (int i = j - 1; i >= 0; i -= 2)
      D(i, j) = S(2) / h * std::sqrt(S(2 * i + 1) * S(2 * j + 1));
  return D;
}

// Coefficients of (alpha + gamma*xi) * p for modal p of degree deg; the
// result has degree deg + 1. Uses xi P_j = ((j+1)P_{j+1} + j P_{j-1})/(2j+1),
// which is width-independent in orthonormal coordinates.
template <typename S>
inline VecX<S> affine_multiply(const VecX<S>& c, S alpha, S gamma) {
  const int deg = static_cast<int>(c.size()) - 1;
  VecX<S> out = VecX<S>::Zero(deg + 2);
  for (int i = 0; i <= deg + 1; ++i) {
    S v = S(0);
    if (i <= deg) v += alpha * c[i];
    if (i >= 1 && i - 1 <= deg)
      v += gamma * S(i) / std::sqrt(S(2 * i - 1) * S(2 * i + 1)) * c[i - 1];
    if (i + 1 <= deg)
      v += gamma * S(i + 1) / std::sqrt(S(2 * i + 3) * S(2 * i + 1)) * c[i + 1];
    out[i] = v;
  }
  return out;
}

// (p, 1)_K from modal coefficients: only the constant mode has mass.
template <typename S>
inline S integral(const VecX<S>& c, S h) {
  return c[0] * std::sqrt(h);
}

// Modal projection of point values sampled at a q-point Gauss rule:
// c_j = sum_p w_p (h/2) f(x_p) phi_j(x_p). Exact when f is a polynomial
// of degree <= 2q - 1 - deg.
template <typename S>
inline VecX<S> project_values(int deg, S h, const std::vector<S>& nodes,
                              const std::vector<S>& weights,
                              const std::vector<S>& fvals) {
  VecX<S> c = VecX<S>::Zero(deg + 1);
  std::vector<S> phi(deg + 1);
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    phi_values(deg, h, nodes[p], phi.data());
    const S scale = weights[p] * h / S(2) * fvals[p];
    for (int j = 0; j <= deg; ++j) c[j] += scale * phi[j];
  }
  return c;
}

} // namespace legendre

} // namespace advest
