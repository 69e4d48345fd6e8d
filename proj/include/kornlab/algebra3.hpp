#pragma once
//
// Exact 3x3 matrix/vector algebra over real or complex scalars.
//
// Conventions:
//   anti(a) b = a x b, axl(anti(a)) = a
//   P x b = P anti(b)   (row-wise cross product, "right")
//   b x P = anti(b) P   (column-wise cross product, "left")
//   pair(X, Y) = sum X_ij Y_ij, bilinear: never conjugated, also for complex
//   scalars. Magnitudes of complex objects use norm(), which is Hermitian.
//
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "kornlab/error.hpp"

namespace kornlab {

using cplx = std::complex<double>;

template <class T>
using Vec3 = Eigen::Matrix<T, 3, 1>;
template <class T>
using Mat3 = Eigen::Matrix<T, 3, 3>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using Vec3c = Vec3<cplx>;
using Mat3c = Mat3<cplx>;

/// Input-validation thresholds, relative to max(1, |input|).
struct Tolerance {
  static constexpr double skew = 1e-9;
  static constexpr double zero = 1e-9;
  static constexpr double unit = 1e-9;
};

enum class Side { Left, Right };

/// Bilinear pairing sum x_i y_i (no conjugation).
template <class T, int R, int C>
T pair(const Eigen::Matrix<T, R, C>& x, const Eigen::Matrix<T, R, C>& y) {
  return (x.array() * y.array()).sum();
}

/// Euclidean / Frobenius magnitude; Hermitian for complex entries.
template <class T, int R, int C>
double norm(const Eigen::Matrix<T, R, C>& x) {
  return x.norm();
}

template <class T>
Mat3<T> identity() {
  return Mat3<T>::Identity();
}

template <class T>
Mat3<T> dyad(const Vec3<T>& a, const Vec3<T>& b) {
  return a * b.transpose();
}

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return Vec3<T>(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

template <class T>
T trace(const Mat3<T>& X) {
  return X.trace();
}

template <class T>
Mat3<T> sym(const Mat3<T>& X) {
  return T(0.5) * (X + X.transpose());
}

template <class T>
Mat3<T> skew(const Mat3<T>& X) {
  return T(0.5) * (X - X.transpose());
}

template <class T>
Mat3<T> dev(const Mat3<T>& X) {
  return X - (X.trace() / T(3)) * Mat3<T>::Identity();
}

template <class T>
Mat3<T> devsym(const Mat3<T>& X) {
  return dev(sym(X));
}

template <class T>
Mat3<T> anti(const Vec3<T>& a) {
  Mat3<T> A;
  A << T(0), -a(2), a(1),
       a(2), T(0), -a(0),
       -a(1), a(0), T(0);
  return A;
}

/// Axial vector of a skew matrix. Throws NotSkew when |A + A^T| exceeds the
/// skew tolerance.
template <class T>
Vec3<T> axl(const Mat3<T>& A) {
  const double scale = std::max(1.0, norm(A));
  if (norm(Mat3<T>(A + A.transpose())) > Tolerance::skew * scale) {
    throw Error(ErrorCode::NotSkew, "axl() requires a skew-symmetric matrix");
  }
  return Vec3<T>(-A(1, 2), A(0, 2), -A(0, 1));
}

/// Axial vector of skew(X); never throws.
template <class T>
Vec3<T> axl_of_skew(const Mat3<T>& X) {
  const Mat3<T> A = skew(X);
  return Vec3<T>(-A(1, 2), A(0, 2), -A(0, 1));
}

/// Matrix-vector cross product: Right gives P anti(b), Left gives anti(b) P.
template <class T>
Mat3<T> cross(const Mat3<T>& P, const Vec3<T>& b, Side side = Side::Right) {
  return side == Side::Right ? Mat3<T>(P * anti(b)) : Mat3<T>(anti(b) * P);
}

/// X = devsym_part + skew_part + sphere_part * id
template <class T>
struct OrthSplit {
  Mat3<T> devsym_part;
  Mat3<T> skew_part;
  T sphere_part;

  Mat3<T> reassemble() const { return devsym_part + skew_part + sphere_part * Mat3<T>::Identity(); }
};

template <class T>
OrthSplit<T> orth_decompose(const Mat3<T>& X) {
  return {devsym(X), skew(X), X.trace() / T(3)};
}

/// Inverse of a -> devsym(anti(a) x b) for fixed real b != 0:
///   a = (2/|b|^2) (M b - 1/4 <M b, b>/|b|^2 b).
inline Vec3d recover_axial(const Mat3d& M, const Vec3d& b) {
  const double bb = b.squaredNorm();
  if (std::sqrt(bb) < Tolerance::zero) {
    throw Error(ErrorCode::ZeroDirection, "recover_axial() needs b != 0");
  }
  const double scale = std::max(1.0, M.norm());
  if ((M - M.transpose()).norm() > Tolerance::skew * scale ||
      std::abs(M.trace()) > Tolerance::skew * scale) {
    throw Error(ErrorCode::NotTracelessSym, "recover_axial() needs a traceless symmetric M");
  }
  const Vec3d Mb = M * b;
  return (2.0 / bb) * (Mb - 0.25 * (Mb.dot(b) / bb) * b);
}

/// Orthogonal projector id - nu (x) nu onto the plane normal to a unit nu.
inline Mat3d tangential_projector(const Vec3d& nu) {
  if (std::abs(nu.norm() - 1.0) > Tolerance::unit) {
    throw Error(ErrorCode::NotUnit, "tangential_projector() needs |nu| = 1");
  }
  return Mat3d::Identity() - nu * nu.transpose();
}

/// Rotation matrix of the quaternion (w, x, y, z); the quaternion is
/// normalized first.
inline Mat3d rotation_from_quaternion(double w, double x, double y, double z) {
  return Eigen::Quaterniond(w, x, y, z).normalized().toRotationMatrix();
}

template <class T>
Mat3<cplx> to_complex(const Mat3<T>& X) {
  return X.template cast<cplx>();
}

template <class T>
Vec3<cplx> to_complex(const Vec3<T>& x) {
  return x.template cast<cplx>();
}

}  // namespace kornlab
