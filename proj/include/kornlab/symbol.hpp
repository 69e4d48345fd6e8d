#pragma once
//
// Fourier symbols of Curl, sym Curl and dev sym Curl as linear maps on
// complex 3x3 matrices, their kernels, the degree-zero multiplier relating
// them, and the complex witness separating the two seminorms.
//
// Flattening: every SymbolOperator acts on 9-vectors obtained from a Mat3 in
// row-major order, slot 3*i + j holds entry (i, j). flatten()/unflatten() are
// the only place this order is encoded.
//
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "kornlab/algebra3.hpp"
#include "kornlab/error.hpp"

namespace kornlab {

using Vec9c = Eigen::Matrix<cplx, 9, 1>;
using Mat9c = Eigen::Matrix<cplx, 9, 9>;

inline Vec9c flatten(const Mat3c& X) {
  Vec9c v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v(3 * i + j) = X(i, j);
  return v;
}

inline Mat3c unflatten(const Vec9c& v) {
  Mat3c X;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) X(i, j) = v(3 * i + j);
  return X;
}

/// Unit matrix e_i (x) e_j for slot = 3*i + j.
inline Mat3c basis_matrix(int slot) {
  Mat3c E = Mat3c::Zero();
  E(slot / 3, slot % 3) = 1.0;
  return E;
}

/// A linear map on the 9-dimensional space of complex 3x3 matrices.
class SymbolOperator {
 public:
  SymbolOperator() : matrix_(Mat9c::Zero()) {}
  explicit SymbolOperator(const Mat9c& m) : matrix_(m) {}

  /// Matrix of the map X -> f(X), assembled column by column on the basis.
  template <class F>
  static SymbolOperator from_map(F&& f) {
    Mat9c m;
    for (int c = 0; c < 9; ++c) m.col(c) = flatten(f(basis_matrix(c)));
    return SymbolOperator(m);
  }

  const Mat9c& matrix() const { return matrix_; }

  Mat3c apply(const Mat3c& X) const { return unflatten(matrix_ * flatten(X)); }

  /// (this o rhs)(X) = this(rhs(X))
  SymbolOperator compose(const SymbolOperator& rhs) const { return SymbolOperator(matrix_ * rhs.matrix_); }

  /// Operator 2-norm (largest singular value).
  double norm() const {
    Eigen::JacobiSVD<Mat9c> svd(matrix_);
    return svd.singularValues()(0);
  }

 private:
  Mat9c matrix_;
};

enum class CurlPart { Full, Sym, DevSym };

/// Symbol of P -> part(Curl P): P_hat -> -i part(P_hat x xi).
inline SymbolOperator curl_symbol(const Vec3c& xi, CurlPart part) {
  const cplx minus_i(0.0, -1.0);
  return SymbolOperator::from_map([&](const Mat3c& P) -> Mat3c {
    const Mat3c X = cross(P, xi, Side::Right);
    switch (part) {
      case CurlPart::Full: return minus_i * X;
      case CurlPart::Sym: return minus_i * sym(X);
      case CurlPart::DevSym: return minus_i * devsym(X);
    }
    return Mat3c::Zero();
  });
}

inline SymbolOperator curl_symbol(const Vec3d& xi, CurlPart part) { return curl_symbol(to_complex(xi), part); }

/// Pointwise map P -> sym P.
inline SymbolOperator sym_projection_symbol() {
  return SymbolOperator::from_map([](const Mat3c& P) -> Mat3c { return sym(P); });
}

/// Default relative threshold for numerical kernels.
inline constexpr double kKernelTolerance = 1e-8;

struct KernelBasis {
  std::vector<Mat3c> vectors;  // Hermitian-orthonormal
  int dimension = 0;
  Eigen::Matrix<double, 9, 1> singular_values;  // descending
  /// Smallest retained singular value over the largest discarded one.
  double gap_ratio = std::numeric_limits<double>::infinity();

  Eigen::Matrix<cplx, 9, Eigen::Dynamic> as_columns() const {
    Eigen::Matrix<cplx, 9, Eigen::Dynamic> B(9, dimension);
    for (int c = 0; c < dimension; ++c) B.col(c) = flatten(vectors[c]);
    return B;
  }
};

/// Orthonormal basis of the numerical kernel: singular values below
/// tau * sigma_max count as zero.
inline KernelBasis kernel_basis(const SymbolOperator& op, double tau = kKernelTolerance) {
  Eigen::JacobiSVD<Mat9c> svd(op.matrix(), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  KernelBasis kb;
  kb.singular_values = s;
  const double cutoff = tau * s(0);
  int rank = 0;
  while (rank < 9 && s(0) > 0.0 && s(rank) >= cutoff) ++rank;
  kb.dimension = 9 - rank;
  for (int c = rank; c < 9; ++c) kb.vectors.push_back(unflatten(svd.matrixV().col(c)));
  if (rank > 0 && rank < 9 && s(rank) > 0.0) kb.gap_ratio = s(rank - 1) / s(rank);
  return kb;
}

/// Sine of the largest principal angle between two kernel spans (1 when the
/// dimensions differ).
inline double max_principal_angle_sine(const KernelBasis& a, const KernelBasis& b) {
  if (a.dimension != b.dimension) return 1.0;
  if (a.dimension == 0) return 0.0;
  const auto A = a.as_columns();
  const auto B = b.as_columns();
  const Eigen::Matrix<cplx, 9, Eigen::Dynamic> residual = B - A * (A.adjoint() * B);
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 9, Eigen::Dynamic>> svd(residual);
  return svd.singularValues()(0);
}

/// Pieces of the degree-zero multiplier M(xi) with M(xi) A(xi) = A~(xi),
/// where A is the dev sym Curl symbol and A~ the sym Curl symbol.
struct MultiplierParts {
  SymbolOperator kernel_projector;  // orthogonal projection onto ker A(xi)
  SymbolOperator pseudo_inverse;    // Q A = Id - P, Q = 0 on (range A)^perp
  SymbolOperator multiplier;        // M = A~ Q
};

inline MultiplierParts multiplier_parts(const Vec3d& xi) {
  if (xi.norm() < Tolerance::zero) {
    throw Error(ErrorCode::ZeroFrequency, "multiplier needs xi != 0");
  }
  const SymbolOperator A = curl_symbol(xi, CurlPart::DevSym);
  const SymbolOperator A_tilde = curl_symbol(xi, CurlPart::Sym);

  Eigen::JacobiSVD<Mat9c> svd(A.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = kKernelTolerance * s(0);
  Mat9c Q = Mat9c::Zero();
  Mat9c P = Mat9c::Zero();
  for (int c = 0; c < 9; ++c) {
    const auto v = svd.matrixV().col(c);
    if (s(c) >= cutoff) {
      Q += (v / s(c)) * svd.matrixU().col(c).adjoint();
    } else {
      P += v * v.adjoint();
    }
  }
  return {SymbolOperator(P), SymbolOperator(Q), SymbolOperator(A_tilde.matrix() * Q)};
}

inline SymbolOperator build_multiplier(const Vec3d& xi) { return multiplier_parts(xi).multiplier; }

/// max over P outside ker of |sym(P x xi)| / |dev sym(P x xi)|, from the
/// largest generalized eigenvalue of the two quadratic forms on ker^perp.
inline double sharp_ratio(const Vec3d& xi) {
  if (xi.norm() < Tolerance::zero) {
    throw Error(ErrorCode::ZeroFrequency, "sharp_ratio needs xi != 0");
  }
  const Mat9c A = curl_symbol(xi, CurlPart::DevSym).matrix();
  const Mat9c A_tilde = curl_symbol(xi, CurlPart::Sym).matrix();

  Eigen::JacobiSVD<Mat9c> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  while (rank < 9 && s(rank) >= kKernelTolerance * s(0)) ++rank;
  const Eigen::Matrix<cplx, 9, Eigen::Dynamic> V = svd.matrixV().leftCols(rank);

  const Eigen::MatrixXcd denom = V.adjoint() * A.adjoint() * A * V;
  const Eigen::MatrixXcd numer = V.adjoint() * A_tilde.adjoint() * A_tilde * V;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(numer, denom, Eigen::EigenvaluesOnly);
  return std::sqrt(ges.eigenvalues().maxCoeff());
}

struct KernelWitness {
  Mat3c p_hat;
  Vec3c xi;
};

/// The complex pair with dev sym(P x xi) = 0 but sym(P x xi) = i id, and
/// <xi, xi> = 0. Both identities are re-checked on construction.
inline KernelWitness complex_kernel_witness() {
  const cplx i(0.0, 1.0);
  KernelWitness w;
  w.p_hat << 0.0, 0.0, -1.0,
             0.0, 0.0, i,
             0.0, -i, 0.0;
  w.xi << 1.0, i, 0.0;
  const Mat3c X = cross(w.p_hat, w.xi, Side::Right);
  if (norm(Mat3c(devsym(X))) > 1e-15 || norm(Mat3c(sym(X) - i * Mat3c::Identity())) > 1e-15 ||
      std::abs(pair(w.xi, w.xi)) > 1e-15) {
    throw Error(ErrorCode::InvariantViolation, "complex kernel witness failed its self-check");
  }
  return w;
}

}  // namespace kornlab
