#pragma once
//
// Per-frequency estimate of the best constant c in the periodic inequality
//
//   |P - T|^2 <= c^2 (|sym P|^2 + |dev sym Curl P|^2)
//
// on the torus of period 2 pi. In Fourier variables the right-hand side splits
// into Hermitian forms Q_k = S^H S + C_k^H C_k on C^{3x3}, S the sym
// projection and C_k the dev sym Curl symbol at xi = k; then
// c = 1 / sqrt(min_k lambda_min(Q_k)), with k = 0 restricted to the
// complement of the skew matrices (the constant kernel).
//
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "kornlab/algebra3.hpp"
#include "kornlab/error.hpp"
#include "kornlab/fields.hpp"
#include "kornlab/parallel.hpp"
#include "kornlab/symbol.hpp"

namespace kornlab {

inline constexpr const char* kTorusConvention =
    "torus [0,2pi)^3 with integer frequencies; form |sym P|^2 + |dev sym Curl P|^2 (squared sum); "
    "constants for the unit-period torus follow by rescaling k -> 2 pi k";

struct FrequencyForm {
  Vec3i k;
  Mat9c form;
};

inline FrequencyForm frequency_form(const Vec3i& k) {
  const Mat9c S = sym_projection_symbol().matrix();
  const Mat9c C = curl_symbol(Vec3d(k.cast<double>()), CurlPart::DevSym).matrix();
  return {k, S.adjoint() * S + C.adjoint() * C};
}

struct LambdaMin {
  double value = 0.0;
  Mat3c minimizer;  // unit Frobenius norm
};

namespace detail {

/// Orthonormal basis of Sym(3) as flattened 9-vectors.
inline Eigen::Matrix<double, 9, 6> symmetric_basis() {
  Eigen::Matrix<double, 9, 6> B = Eigen::Matrix<double, 9, 6>::Zero();
  int c = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j, ++c) {
      const double w = i == j ? 1.0 : std::sqrt(0.5);
      B(3 * i + j, c) = w;
      B(3 * j + i, c) = w;
    }
  return B;
}

}  // namespace detail

/// Smallest value of Q_k(P) / |P|^2 over complex P, through the real 18x18
/// symmetric embedding [[Re Q, -Im Q], [Im Q, Re Q]].
inline LambdaMin lambda_min(const Vec3i& k) {
  const Mat9c Q = frequency_form(k).form;
  if (k.isZero()) {
    const Eigen::Matrix<double, 9, 6> B = detail::symmetric_basis();
    const Eigen::Matrix<double, 6, 6> R = B.transpose() * Q.real() * B;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(R);
    const Eigen::Matrix<double, 9, 1> v = B * es.eigenvectors().col(0);
    return {es.eigenvalues()(0), unflatten(v.cast<cplx>()) / v.norm()};
  }
  Eigen::Matrix<double, 18, 18> E;
  E << Q.real(), -Q.imag(), Q.imag(), Q.real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 18, 18>> es(E);
  const auto v = es.eigenvectors().col(0);
  Vec9c z;
  for (int i = 0; i < 9; ++i) z(i) = cplx(v(i), v(i + 9));
  return {es.eigenvalues()(0), unflatten(z / z.norm())};
}

struct FrequencyValue {
  Vec3i k;
  double lambda = 0.0;
};

struct KornReport {
  std::vector<FrequencyValue> per_frequency;  // lexicographic in (k1, k2, k3)
  int kmax = 0;
  double lambda_global = 0.0;
  Vec3i argmin = Vec3i::Zero();
  double c_estimate = 0.0;
  double shell_min = 0.0;  // min over |k|_inf = kmax
  bool non_monotone_tail = false;
  std::string convention = kTorusConvention;
  std::optional<double> crosscheck_residual;
};

inline KornReport korn_constant(int kmax) {
  if (kmax < 1) throw Error(ErrorCode::UsageError, "korn_constant needs kmax >= 1");
  const int side = 2 * kmax + 1;
  const std::size_t count = static_cast<std::size_t>(side) * side * side;
  KornReport rep;
  rep.kmax = kmax;
  rep.per_frequency.resize(count);
  parallel_for(count, [&](std::size_t i) {
    const int k1 = static_cast<int>(i / (side * side)) - kmax;
    const int k2 = static_cast<int>((i / side) % side) - kmax;
    const int k3 = static_cast<int>(i % side) - kmax;
    const Vec3i k(k1, k2, k3);
    rep.per_frequency[i] = {k, lambda_min(k).value};
  });

  rep.lambda_global = std::numeric_limits<double>::infinity();
  rep.shell_min = std::numeric_limits<double>::infinity();
  for (const auto& fv : rep.per_frequency) {
    if (fv.lambda < rep.lambda_global) {
      rep.lambda_global = fv.lambda;
      rep.argmin = fv.k;
    }
    if (fv.k.cwiseAbs().maxCoeff() == kmax) rep.shell_min = std::min(rep.shell_min, fv.lambda);
  }
  rep.c_estimate = 1.0 / std::sqrt(rep.lambda_global);
  rep.non_monotone_tail = rep.shell_min <= rep.lambda_global;
  return rep;
}

// ---------------------------------------------------------------------------
// Field-level cross-check

struct CrosscheckResult {
  double lambda_grid = 0.0;
  double lambda_spectral = 0.0;
  double residual = 0.0;  // |lambda_grid - lambda_spectral|
  Vec3i dominant_k = Vec3i::Zero();
  int iterations = 0;
};

namespace detail {

class GridOperator {
 public:
  explicit GridOperator(GridSpec grid) : grid_(grid), mask_(grid.points()), precond_(grid.points()) {
    const int band = grid.n() / 2 - 1;
    for (std::size_t f = 0; f < grid.points(); ++f) {
      const Vec3i k = grid.frequency_of(f);
      mask_[f] = k.cwiseAbs().maxCoeff() <= band;
      precond_[f] = 1.0 / (1.0 + k.squaredNorm());
    }
  }

  /// H P = sym P + Curl(dev sym Curl P); Curl is self-adjoint on the torus.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
    const GridField P = field(v);
    const GridField H = sym(P) + apply_operator(apply_operator(P, DiffOp::DevSymCurl), DiffOp::CurlMat);
    return Eigen::Map<const Eigen::VectorXcd>(H.coefficients().data(), v.size());
  }

  /// Restriction to band-limited fields without a constant skew part.
  void project(Eigen::VectorXcd& v) const {
    for (std::size_t f = 0; f < grid_.points(); ++f)
      if (!mask_[f]) v.segment<9>(9 * f).setZero();
    const Mat3c mean = unflatten(v.segment<9>(0));
    v.segment<9>(0) = flatten(Mat3c(mean - skew(mean)));
  }

  void precondition(Eigen::VectorXcd& v) const {
    for (std::size_t f = 0; f < grid_.points(); ++f) v.segment<9>(9 * f) *= precond_[f];
  }

  Vec3i dominant_frequency(const Eigen::VectorXcd& v) const {
    std::size_t best = 0;
    double energy = -1.0;
    for (std::size_t f = 0; f < grid_.points(); ++f) {
      const Vec3i k = grid_.frequency_of(f);
      int lead = 0;
      for (int d = 0; d < 3 && lead == 0; ++d) lead = (k(d) > 0) - (k(d) < 0);
      if (lead < 0) continue;
      const double e = v.segment<9>(9 * f).squaredNorm();
      if (e > energy * (1.0 + 1e-9)) {
        energy = e;
        best = f;
      }
    }
    return grid_.frequency_of(best);
  }

 private:
  GridField field(const Eigen::VectorXcd& v) const {
    return GridField(grid_, 2, Reality::Real, std::vector<cplx>(v.data(), v.data() + v.size()));
  }

  GridSpec grid_;
  std::vector<bool> mask_;
  std::vector<double> precond_;
};

inline double real_dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return a.dot(b).real(); }

}  // namespace detail

/// Smallest eigenvalue of the field-level form on an n^3 grid by
/// preconditioned LOBPCG (single vector), compared to the per-frequency
/// minimum over the same band |k|_inf <= n/2 - 1.
inline CrosscheckResult grid_crosscheck(int n, std::uint64_t seed, int iterations = 500) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw Error(ErrorCode::BadGrid, "grid_crosscheck needs n a power of two >= 8, got " + std::to_string(n));
  }
  const GridSpec grid(n);
  const detail::GridOperator H(grid);
  const GridField start = random_bandlimited(grid, seed, n / 2 - 1, 2, Structure::General);
  Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(start.coefficients().data(), start.coefficients().size());
  H.project(x);
  x /= x.norm();

  Eigen::VectorXcd p;
  double lambda = detail::real_dot(x, H.apply(x));
  CrosscheckResult res;
  for (int it = 0;; ++it) {
    Eigen::VectorXcd r = H.apply(x) - lambda * x;
    if (r.norm() < 1e-9) {
      res.iterations = it;
      break;
    }
    if (it == iterations) {
      throw Error(ErrorCode::NoConvergence, "grid_crosscheck did not converge in " + std::to_string(iterations) +
                                                " iterations");
    }
    H.precondition(r);
    H.project(r);

    // orthonormal basis of span{x, w, p}
    std::vector<Eigen::VectorXcd> basis{x};
    for (Eigen::VectorXcd v : {r, p}) {
      if (v.size() == 0) continue;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) v -= detail::real_dot(b, v) * b;
      const double nv = v.norm();
      if (nv > 1e-12) basis.push_back(v / nv);
    }
    const int m = static_cast<int>(basis.size());
    std::vector<Eigen::VectorXcd> hb(m);
    for (int i = 0; i < m; ++i) hb[i] = H.apply(basis[i]);
    Eigen::MatrixXd A(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) A(i, j) = detail::real_dot(basis[i], hb[j]);
    A = 0.5 * (A + A.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const Eigen::VectorXd c = es.eigenvectors().col(0);

    Eigen::VectorXcd next = c(0) * basis[0];
    Eigen::VectorXcd dir = Eigen::VectorXcd::Zero(x.size());
    for (int i = 1; i < m; ++i) dir += c(i) * basis[i];
    next += dir;
    const double nn = next.norm();
    x = next / nn;
    p = dir / nn;
    lambda = detail::real_dot(x, H.apply(x));
  }

  res.lambda_grid = lambda;
  res.lambda_spectral = korn_constant(n / 2 - 1).lambda_global;
  res.residual = std::abs(res.lambda_grid - res.lambda_spectral);
  res.dominant_k = H.dominant_frequency(x);
  return res;
}

struct EquivalenceConstant {
  double value = 0.0;   // max sample
  double spread = 0.0;  // max - min over the samples
  int samples = 0;
};

/// sup over unit xi of sharp_ratio(xi), sampled on a Fibonacci sphere.
inline EquivalenceConstant equivalence_constant(int samples = 1000) {
  std::vector<double> r(samples);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
    const double z = 1.0 - (2.0 * i + 1.0) / samples;
    const double s = std::sqrt(1.0 - z * z);
    const double phi = golden * i;
    r[i] = sharp_ratio(Vec3d(s * std::cos(phi), s * std::sin(phi), z));
  });
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  return {*hi, *hi - *lo, samples};
}

}  // namespace kornlab
