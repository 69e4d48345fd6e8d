#pragma once
//
// Reference computations that take a different route from the library:
// direct formulas, closed-form integrals, brute-force search and finite
// differences.
//
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "kornlab/algebra3.hpp"
#include "kornlab/fields.hpp"
#include "kornlab/finite_difference.hpp"
#include "kornlab/growth.hpp"
#include "kornlab/quadrature.hpp"

namespace oracle {

using kornlab::cplx;
using kornlab::Mat3d;
using kornlab::Vec3d;

/// anti(a) from its columns a x e_j.
inline Mat3d anti(const Vec3d& a) {
  Mat3d A;
  for (int j = 0; j < 3; ++j) A.col(j) = a.cross(Vec3d::Unit(j));
  return A;
}

inline Mat3d devsym(const Mat3d& X) {
  const Mat3d S = 0.5 * (X + X.transpose());
  return S - S.trace() / 3.0 * Mat3d::Identity();
}

/// ratio |sym(P x xi)| / |dev sym(P x xi)| for real P.
inline double symbol_ratio(const Mat3d& P, const Vec3d& xi) {
  const Mat3d X = P * anti(xi);
  const double d = devsym(X).norm();
  return d > 0.0 ? (0.5 * (X + X.transpose())).norm() / d : 0.0;
}

/// Brute-force maximum of symbol_ratio over real 3x3 P: random starts
/// followed by a shrinking-step pattern search. For real xi the complex
/// problem splits into two independent real ones, so real P suffice.
inline double sharp_ratio_search(const Vec3d& xi, unsigned seed = 7, int starts = 200) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double best = 0.0;
  Mat3d best_p = Mat3d::Zero();
  for (int s = 0; s < starts; ++s) {
    Mat3d P;
    for (int i = 0; i < 9; ++i) P(i / 3, i % 3) = g(rng);
    const double r = symbol_ratio(P, xi);
    if (r > best) {
      best = r;
      best_p = P;
    }
  }
  Mat3d P = best_p / best_p.norm();
  double step = 0.25;
  while (step > 1e-9) {
    bool improved = false;
    for (int i = 0; i < 9; ++i)
      for (double sgn : {1.0, -1.0}) {
        Mat3d Q = P;
        Q(i / 3, i % 3) += sgn * step;
        Q /= Q.norm();
        const double r = symbol_ratio(Q, xi);
        if (r > best) {
          best = r;
          P = Q;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
  }
  return best;
}

/// Q_k as a real symmetric 9x9 matrix assembled by polarization of
/// |sym P|^2 + |dev sym(P x k)|^2 on the standard basis. For real k the
/// Hermitian form is real, so its minimum over C equals the minimum over R.
inline Eigen::Matrix<double, 9, 9> korn_form(const Vec3d& k) {
  auto q = [&](const Mat3d& P) {
    return (0.5 * (P + P.transpose())).squaredNorm() + devsym(P * anti(k)).squaredNorm();
  };
  auto E = [](int s) {
    Mat3d M = Mat3d::Zero();
    M(s / 3, s % 3) = 1.0;
    return M;
  };
  Eigen::Matrix<double, 9, 9> F;
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) F(a, b) = 0.5 * (q(E(a) + E(b)) - q(E(a)) - q(E(b)));
  return F;
}

inline double korn_lambda(const Eigen::Vector3i& k) {
  if (k.isZero()) return 1.0;  // sym P = P on the complement of the skew matrices
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> es(korn_form(k.cast<double>()));
  return es.eigenvalues()(0);
}

/// Exact integral of (x^2 + y^2)^m over [-1,1]^2 by the binomial expansion.
inline double square_moment(int m) {
  double sum = 0.0, binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    sum += binom * (2.0 / (2 * j + 1)) * (2.0 / (2 * (m - j) + 1));
    binom = binom * (m - j) / (j + 1);
  }
  return sum;
}

/// |k z^(k-1)|_2 / |z^k|_2 on (-1,1)^3 in closed form.
inline double growth_ratio_p2(int k) { return k * std::sqrt(square_moment(k - 1) / square_moment(k)); }

/// Half-space ratio by Cartesian Gauss quadrature over the half ball
/// {x1 < 0, |x| < 2}, with the Curl taken by central differences of the
/// field itself rather than the closed form.
inline double halfspace_ratio_fd(int k, int m = 48) {
  const auto gx = kornlab::gauss_legendre(m, -2.0, 0.0);
  const auto gy = kornlab::gauss_legendre(2 * m, -2.0, 2.0);
  double num = 0.0, den = 0.0;
  auto field = [k](const Vec3d& x) { return kornlab::halfspace_field(k, x); };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < 2 * m; ++j)
      for (int l = 0; l < 2 * m; ++l) {
        const Vec3d x(gx.nodes[i], gy.nodes[j], gy.nodes[l]);
        if (x.norm() >= 2.0) continue;
        const kornlab::Mat3c C = kornlab::fd::curl(field, x, 1e-5);
        const kornlab::Mat3c S = 0.5 * (C + C.transpose());
        const kornlab::Mat3c D = S - S.trace() / 3.0 * kornlab::Mat3c::Identity();
        const double w = gx.weights[i] * gy.weights[j] * gy.weights[l];
        num += w * S.squaredNorm();
        den += w * D.squaredNorm();
      }
  return std::sqrt(num / den);
}

/// Rank of the boundary system assembled from the formula for f with unit
/// parameter vectors, decided by full-pivot LU.
inline int boundary_rank(const std::vector<Vec3d>& pts) {
  Eigen::MatrixXd M(3 * pts.size(), 10);
  for (int c = 0; c < 10; ++c) {
    Vec3d a = Vec3d::Zero(), b = Vec3d::Zero(), d = Vec3d::Zero();
    double beta = 0.0;
    if (c < 3) a(c) = 1.0;
    else if (c == 3) beta = 1.0;
    else if (c < 7) b(c - 4) = 1.0;
    else d(c - 7) = 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec3d& x = pts[i];
      M.block<3, 1>(3 * i, c) = anti(a) * x + beta * x + b + d.dot(x) * x - 0.5 * x.squaredNorm() * d;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-8);
  return static_cast<int>(lu.rank());
}

}  // namespace oracle
