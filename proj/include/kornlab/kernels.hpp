#pragma once
//
// Finite-dimensional kernels of (sym P, sym Curl P) and (sym P, dev sym Curl P):
//
//   T(x) = anti(A~ x + beta x + b + <d, x> x - 1/2 d |x|^2),  A~ = anti(a_tilde)
//
// with beta = 0, d = 0 in the smaller space. The axial vector of T is a
// conformal Killing field.
//
#include <array>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "kornlab/algebra3.hpp"
#include "kornlab/error.hpp"

namespace kornlab {

enum class KernelSpace { SSC, SdSC };

inline int parameter_count(KernelSpace s) { return s == KernelSpace::SSC ? 6 : 10; }

struct KernelElement {
  Vec3d a_tilde = Vec3d::Zero();
  double beta = 0.0;
  Vec3d b = Vec3d::Zero();
  Vec3d d = Vec3d::Zero();

  /// Parameter vector (a_tilde, beta, b, d), or (a_tilde, b) for SSC.
  Eigen::VectorXd parameters(KernelSpace s = KernelSpace::SdSC) const {
    Eigen::VectorXd v(parameter_count(s));
    if (s == KernelSpace::SSC) {
      v << a_tilde, b;
    } else {
      v << a_tilde, beta, b, d;
    }
    return v;
  }

  static KernelElement from_parameters(const Eigen::VectorXd& v, KernelSpace s = KernelSpace::SdSC) {
    KernelElement e;
    e.a_tilde = v.segment<3>(0);
    if (s == KernelSpace::SSC) {
      e.b = v.segment<3>(3);
    } else {
      e.beta = v(3);
      e.b = v.segment<3>(4);
      e.d = v.segment<3>(7);
    }
    return e;
  }

  Vec3d axial(const Vec3d& x) const {
    return cross(a_tilde, x) + beta * x + b + d.dot(x) * x - 0.5 * x.squaredNorm() * d;
  }
};

inline Mat3d eval_kernel(const KernelElement& e, const Vec3d& x) { return anti(e.axial(x)); }

/// Curl T(x) = 2 (beta + <d, x>) id + anti(a_tilde) + anti(d x x).
inline Mat3d curl_kernel_closed_form(const KernelElement& e, const Vec3d& x) {
  return 2.0 * (e.beta + e.d.dot(x)) * Mat3d::Identity() + anti(e.a_tilde) + anti(cross(e.d, x));
}

/// phi(x) = <a, x> x - 1/2 a |x|^2 + A x + beta x + b, A = anti(A_axial).
struct ConformalKilling {
  Vec3d a = Vec3d::Zero();
  Vec3d A_axial = Vec3d::Zero();
  double beta = 0.0;
  Vec3d b = Vec3d::Zero();

  Vec3d operator()(const Vec3d& x) const {
    return a.dot(x) * x - 0.5 * x.squaredNorm() * a + cross(A_axial, x) + beta * x + b;
  }

  /// D phi = (beta + <a, x>) id + A + x (x) a - a (x) x
  Mat3d jacobian(const Vec3d& x) const {
    return (beta + a.dot(x)) * Mat3d::Identity() + anti(A_axial) + x * a.transpose() - a * x.transpose();
  }
};

inline ConformalKilling axial_field(const KernelElement& e) { return {e.d, e.a_tilde, e.beta, e.b}; }

struct KernelFit {
  KernelElement element;
  double residual = 0.0;  // sqrt(sum_i |P(x_i) - T(x_i)|^2)
  double condition = 0.0;  // condition number of the normal matrix
};

namespace detail {

/// Derivative of the axial vector with respect to parameter `c`.
inline Vec3d axial_direction(int c, KernelSpace s, const Vec3d& x) {
  if (c < 3) return cross(Vec3d(Vec3d::Unit(c)), x);
  if (s == KernelSpace::SSC) return Vec3d::Unit(c - 3);
  if (c == 3) return x;
  if (c < 7) return Vec3d::Unit(c - 4);
  const int j = c - 7;
  return x(j) * x - 0.5 * x.squaredNorm() * Vec3d::Unit(j);
}

}  // namespace detail

/// Least-squares fit of a kernel element to matrix samples. Uses the normal
/// equations while their condition number stays below 1e6, QR beyond that.
inline KernelFit project_kernel(const std::vector<std::pair<Vec3d, Mat3d>>& samples, KernelSpace space) {
  const int np = parameter_count(space);
  const std::size_t minimum = space == KernelSpace::SSC ? 6 : 10;
  if (samples.size() < minimum) {
    throw Error(ErrorCode::TooFewSamples, "project_kernel needs at least " + std::to_string(minimum) + " samples");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(9 * samples.size());
  Eigen::MatrixXd G(rows, np);
  Eigen::VectorXd y(rows);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [x, P] = samples[i];
    for (int c = 0; c < np; ++c) {
      const Mat3d col = anti(detail::axial_direction(c, space, x));
      for (int s = 0; s < 9; ++s) G(9 * i + s, c) = col(s / 3, s % 3);
    }
    for (int s = 0; s < 9; ++s) y(9 * i + s) = P(s / 3, s % 3);
  }

  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(G).singularValues();
  const double smin = sv(np - 1);
  const double cond = smin > 0.0 ? (sv(0) / smin) * (sv(0) / smin) : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12)) {
    throw Error(ErrorCode::DegenerateGeometry, "sample points do not determine the kernel element");
  }
  const Eigen::VectorXd theta =
      cond <= 1e6 ? Eigen::VectorXd((G.transpose() * G).ldlt().solve(G.transpose() * y))
                  : Eigen::VectorXd(G.colPivHouseholderQr().solve(y));
  return {KernelElement::from_parameters(theta, space), (G * theta - y).norm(), cond};
}

struct PointCloud {
  std::vector<Vec3d> points;

  explicit PointCloud(std::vector<Vec3d> pts) : points(std::move(pts)) {
    if (points.empty()) throw Error(ErrorCode::UsageError, "point cloud must be non-empty");
  }
};

/// Rank of {f(x) = 0 : x in the cloud} in the unknowns (A, beta, b, d), where
/// f(x) = A x + beta x + b + <d, x> x - 1/2 d |x|^2. Singular values below
/// 1e-8 times the largest count as zero.
inline int boundary_rank(const PointCloud& cloud) {
  Eigen::MatrixXd M(3 * static_cast<Eigen::Index>(cloud.points.size()), 10);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    for (int c = 0; c < 10; ++c) M.block<3, 1>(3 * i, c) = detail::axial_direction(c, KernelSpace::SdSC, cloud.points[i]);
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(0) > 0.0 && sv(i) >= 1e-8 * sv(0)) ++rank;
  return rank;
}

}  // namespace kornlab
