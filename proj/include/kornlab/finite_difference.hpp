#pragma once
//
// Second-order central differences for fields on R^3, used as an independent
// check of closed-form derivatives of non-periodic objects.
//
#include "kornlab/algebra3.hpp"

namespace kornlab::fd {

inline constexpr double kStep = 1e-4;

/// (D v)_ij = d_j v_i for a vector field v.
template <class F>
auto jacobian(F&& v, const Vec3d& x, double h = kStep) {
  using V = decltype(v(x));
  using T = typename V::Scalar;
  Mat3<T> J;
  for (int j = 0; j < 3; ++j) {
    const Vec3d e = Vec3d::Unit(j) * h;
    J.col(j) = (v(x + e) - v(x - e)) / T(2.0 * h);
  }
  return J;
}

/// Row-wise curl of a matrix field: row i of Curl P is curl of row i of P.
template <class F>
auto curl(F&& P, const Vec3d& x, double h = kStep) {
  using M = decltype(P(x));
  using T = typename M::Scalar;
  // d[j] = d_j P
  M d[3];
  for (int j = 0; j < 3; ++j) {
    const Vec3d e = Vec3d::Unit(j) * h;
    d[j] = (P(x + e) - P(x - e)) / T(2.0 * h);
  }
  Mat3<T> C;
  for (int i = 0; i < 3; ++i) {
    C(i, 0) = d[1](i, 2) - d[2](i, 1);
    C(i, 1) = d[2](i, 0) - d[0](i, 2);
    C(i, 2) = d[0](i, 1) - d[1](i, 0);
  }
  return C;
}

}  // namespace kornlab::fd
