#pragma once
//
// Randomized verification of the pointwise algebra and the spectral calculus
// identities. Three kinds of checks:
//   pointwise  - random vectors/matrices with entries uniform in [-1, 1]
//   spectral   - random band-limited torus fields, exact Fourier operators
//   box        - closed forms of polynomial fields against central differences
// Each entry records the largest residual |lhs - rhs| / max(1, |lhs|, |rhs|,
// scale) seen over its samples, with `scale` the size of the natural
// intermediate quantity for identities whose sides vanish.
//
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "kornlab/algebra3.hpp"
#include "kornlab/error.hpp"
#include "kornlab/fields.hpp"
#include "kornlab/finite_difference.hpp"
#include "kornlab/growth.hpp"
#include "kornlab/kernels.hpp"
#include "kornlab/parallel.hpp"
#include "kornlab/quadrature.hpp"

namespace kornlab {

enum class IdentityKind { Pointwise, Spectral, Box };

inline const char* to_string(IdentityKind k) {
  switch (k) {
    case IdentityKind::Pointwise: return "pointwise";
    case IdentityKind::Spectral: return "spectral";
    case IdentityKind::Box: return "box";
  }
  return "?";
}

inline double default_tolerance(IdentityKind k) {
  switch (k) {
    case IdentityKind::Pointwise: return 1e-12;
    case IdentityKind::Spectral: return 1e-10;
    case IdentityKind::Box: return 1e-7;
  }
  return 0.0;
}

struct SuiteConfig {
  std::uint64_t seed = 1;
  int samples = 1000;  // pointwise and box samples per identity
  int grid_n = 16;
  int kmax = -1;  // band limit of random fields; -1 means grid_n / 4
  BoxDomain box;

  /// Random fields per spectral identity.
  int field_samples() const { return std::max(1, samples / 100); }
  int band() const { return kmax < 0 ? grid_n / 4 : kmax; }
};

struct IdentityResult {
  std::string name;
  std::string reference;  // the identity, written out
  IdentityKind kind = IdentityKind::Pointwise;
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string error;  // non-empty when the check threw
};

struct Measure {
  double diff = 0.0;
  double scale = 0.0;
  double residual() const { return diff / std::max(1.0, scale); }
};

/// Residual of an equality.
template <class L, class R>
Measure compare(const L& lhs, const R& rhs, double extra_scale = 0.0) {
  return {(lhs - rhs).norm(), std::max({lhs.norm(), rhs.norm(), extra_scale})};
}

inline Measure compare(double lhs, double rhs, double extra_scale = 0.0) {
  return {std::abs(lhs - rhs), std::max({std::abs(lhs), std::abs(rhs), extra_scale})};
}

/// Residual of an inequality lhs <= rhs.
inline Measure at_most(double lhs, double rhs) {
  return {std::max(0.0, lhs - rhs), std::max(std::abs(lhs), std::abs(rhs))};
}

inline Measure compare(const GridField& lhs, const GridField& rhs, double extra_scale = 0.0) {
  return {(lhs - rhs).coefficient_norm(), std::max({lhs.coefficient_norm(), rhs.coefficient_norm(), extra_scale})};
}

/// Deterministic random inputs for one identity.
class Sampler {
 public:
  Sampler(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    rng_.seed(seq);
  }

  double scalar() { return u_(rng_); }
  Vec3d vec() {
    Vec3d v;
    for (int i = 0; i < 3; ++i) v(i) = scalar();
    return v;
  }
  Mat3d mat() {
    Mat3d X;
    for (int i = 0; i < 9; ++i) X(i / 3, i % 3) = scalar();
    return X;
  }
  Mat3d sym_mat() { return sym(mat()); }
  Mat3d skew_mat() { return skew(mat()); }
  Vec3d unit() {
    Vec3d v;
    do v = vec();
    while (v.norm() < 1e-3 || v.norm() > 1.0);
    return v.normalized();
  }
  Vec3d point_in(const BoxDomain& box) {
    Vec3d x;
    for (int d = 0; d < 3; ++d) x(d) = box.lower(d) + 0.5 * (scalar() + 1.0) * (box.upper(d) - box.lower(d));
    return x;
  }
  std::uint64_t next_seed() { return rng_(); }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> u_{-1.0, 1.0};
};

struct IdentityCase {
  std::string name;
  std::string reference;
  IdentityKind kind;
  std::function<Measure(Sampler&)> check;
};

namespace detail {

inline Mat3d id3() { return Mat3d::Identity(); }

inline std::vector<IdentityCase> pointwise_cases() {
  std::vector<IdentityCase> c;
  auto add = [&](std::string name, std::string ref, std::function<Measure(Sampler&)> fn) {
    c.push_back({std::move(name), std::move(ref), IdentityKind::Pointwise, std::move(fn)});
  };

  add("scalar_product_trace", "<a,b> = tr(a (x) b)", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    return compare(a.dot(b), trace(dyad(a, b)));
  });
  add("cross_as_axl", "a x b = axl(b (x) a - a (x) b)", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    return compare(cross(a, b), axl(Mat3d(dyad(b, a) - dyad(a, b))));
  });
  add("cross_orthogonality", "b x b = 0 and <a x b, b> = 0", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    return Measure{cross(b, b).norm() + std::abs(cross(a, b).dot(b)), a.norm() * b.norm()};
  });
  add("skew_dyad", "2 skew(a (x) b) = -anti(a x b)", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    return compare(Mat3d(2.0 * skew(dyad(a, b))), Mat3d(-anti(cross(a, b))));
  });
  add("anti_action", "anti(a) b = a x b = -anti(b) a", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    const Vec3d ab = cross(a, b);
    return Measure{(anti(a) * b - ab).norm() + (ab + anti(b) * a).norm(), ab.norm()};
  });
  add("skew_action", "A b = axl(A) x b", [](Sampler& s) {
    const Mat3d A = s.skew_mat();
    const Vec3d b = s.vec();
    return compare(Vec3d(A * b), cross(axl(A), b));
  });
  add("dyad_action", "(a (x) b) b = |b|^2 a and (b (x) a) b = <a,b> b = |b|^2 a + (a x b) x b", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    const Vec3d lhs = dyad(b, a) * b;
    return Measure{(Vec3d(dyad(a, b) * b) - b.squaredNorm() * a).norm() + (lhs - a.dot(b) * b).norm() +
                       (lhs - (b.squaredNorm() * a + cross(cross(a, b), b))).norm(),
                   lhs.norm()};
  });
  add("matrix_cross_right", "P x b = P anti(b) = -(anti(b) P^T)^T", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d b = s.vec();
    const Mat3d X = cross(P, b);
    return Measure{(X - P * anti(b)).norm() + (X + (anti(b) * P.transpose()).transpose()).norm(), X.norm()};
  });
  add("identity_cross", "id x b = anti(b)", [](Sampler& s) {
    const Vec3d b = s.vec();
    return compare(cross(id3(), b), anti(b));
  });
  add("dyad_cross", "(a (x) b) x b = 0 and (b (x) a) x b / 2 = sym(a (x) b) x b = -skew(a (x) b) x b = -b (x) axl skew(a (x) b)",
      [](Sampler& s) {
        const Vec3d a = s.vec(), b = s.vec();
        const Mat3d D = dyad(a, b);
        const Mat3d half = 0.5 * cross(Mat3d(dyad(b, a)), b);
        const Mat3d r1 = cross(Mat3d(sym(D)), b), r2 = -cross(Mat3d(skew(D)), b);
        const Mat3d r3 = -dyad(b, axl(Mat3d(skew(D))));
        return Measure{cross(D, b).norm() + (half - r1).norm() + (half - r2).norm() + (half - r3).norm(),
                       std::max(D.norm() * b.norm(), half.norm())};
      });
  add("room_anti", "anti(a) x b = anti(a) anti(b) = b (x) a - <b,a> id", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    const Mat3d X = cross(anti(a), b);
    return Measure{(X - anti(a) * anti(b)).norm() + (X - (dyad(b, a) - b.dot(a) * id3())).norm(), X.norm()};
  });
  add("room_skew", "A x b = b (x) axl A - <b, axl A> id", [](Sampler& s) {
    const Mat3d A = s.skew_mat();
    const Vec3d b = s.vec();
    return compare(cross(A, b), Mat3d(dyad(b, axl(A)) - b.dot(axl(A)) * id3()));
  });
  add("room_inverse", "(axl A) (x) b = (A x b)^T - tr(A x b)/2 id", [](Sampler& s) {
    const Mat3d A = s.skew_mat();
    const Vec3d b = s.vec();
    const Mat3d X = cross(A, b);
    return compare(dyad(axl(A), b), Mat3d(X.transpose() - 0.5 * X.trace() * id3()));
  });
  add("trace_anti_cross", "tr(anti(a) x b) = -2 <a,b> and tr(A x b) = -2 <axl A, b>", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    const Mat3d A = s.skew_mat();
    return Measure{std::abs(trace(cross(anti(a), b)) + 2.0 * a.dot(b)) +
                       std::abs(trace(cross(A, b)) + 2.0 * axl(A).dot(b)),
                   a.norm() * b.norm() + A.norm() * b.norm()};
  });
  add("anti_powers", "anti(b)^2 = b (x) b - |b|^2 id and anti(b)^3 = -|b|^2 anti(b)", [](Sampler& s) {
    const Vec3d b = s.vec();
    const Mat3d W = anti(b);
    return Measure{(W * W - (dyad(b, b) - b.squaredNorm() * id3())).norm() + (W * W * W + b.squaredNorm() * W).norm(),
                   b.squaredNorm()};
  });
  add("trace_sym_cross", "tr(S x b) = 0", [](Sampler& s) {
    const Mat3d S = s.sym_mat();
    const Vec3d b = s.vec();
    return Measure{std::abs(trace(cross(S, b))), S.norm() * b.norm()};
  });
  add("double_cross", "(P x b)^T x b = -anti(b) P^T anti(b) = -b x P^T x b", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d b = s.vec();
    const Mat3d X = cross(Mat3d(cross(P, b).transpose()), b);
    const Mat3d Y = -anti(b) * P.transpose() * anti(b);
    const Mat3d Z = -cross(Mat3d(cross(Mat3d(P.transpose()), b, Side::Left)), b);
    return Measure{(X - Y).norm() + (X - Z).norm(), X.norm()};
  });
  add("double_cross_identity", "(id x b)^T x b = |b|^2 id - b (x) b", [](Sampler& s) {
    const Vec3d b = s.vec();
    return compare(cross(Mat3d(cross(id3(), b).transpose()), b), Mat3d(b.squaredNorm() * id3() - dyad(b, b)));
  });
  add("double_cross_dyad", "((b (x) a) x b)^T x b = 0, also for sym(a (x) b) and skew(a (x) b)", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    auto dc = [&b](const Mat3d& X) { return cross(Mat3d(cross(X, b).transpose()), b).norm(); };
    const Mat3d D = dyad(a, b);
    return Measure{dc(dyad(b, a)) + dc(sym(D)) + dc(skew(D)), a.norm() * std::pow(b.norm(), 3)};
  });
  add("double_cross_anti", "(anti(a) x b)^T x b = -<b,a> anti(b)", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    return compare(cross(Mat3d(cross(anti(a), b).transpose()), b), Mat3d(-b.dot(a) * anti(b)));
  });
  add("double_cross_sym",
      "(S x b)^T x b is symmetric with trace |b|^2 tr S - <S, b (x) b> and equals S (b (x) b) + (b (x) b) S - |b|^2 S "
      "- tr(S) b (x) b + (|b|^2 tr S - <S, b (x) b>) id",
      [](Sampler& s) {
        const Mat3d S = s.sym_mat();
        const Vec3d b = s.vec();
        const Mat3d X = cross(Mat3d(cross(S, b).transpose()), b);
        const Mat3d B = dyad(b, b);
        const double t = b.squaredNorm() * S.trace() - pair(S, B);
        const Mat3d expanded = S * B + B * S - b.squaredNorm() * S - S.trace() * B + t * id3();
        return Measure{(X - X.transpose()).norm() + std::abs(X.trace() - t) + (X - expanded).norm(), X.norm()};
      });
  add("dev_cross", "dev(P x b) = P x b + 2/3 <axl skew P, b> id", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d b = s.vec();
    return compare(dev(Mat3d(cross(P, b))),
                   Mat3d(cross(P, b) + (2.0 / 3.0) * axl(Mat3d(skew(P))).dot(b) * id3()));
  });
  add("double_cross_transpose",
      "[(P x b)^T x b]^T = (P^T x b)^T x b, with sym and skew commuting through", [](Sampler& s) {
        const Mat3d P = s.mat();
        const Vec3d b = s.vec();
        auto dc = [&b](const Mat3d& X) -> Mat3d { return cross(Mat3d(cross(X, b).transpose()), b); };
        const Mat3d X = dc(P);
        return Measure{(Mat3d(X.transpose()) - dc(P.transpose())).norm() + (Mat3d(sym(X)) - dc(sym(P))).norm() +
                           (Mat3d(skew(X)) - dc(skew(P))).norm(),
                       X.norm()};
      });
  add("triple_cross_trace", "tr[((S x b) x b)^T x b] = 0", [](Sampler& s) {
    const Mat3d S = s.sym_mat();
    const Vec3d b = s.vec();
    const Mat3d X = cross(Mat3d(cross(Mat3d(cross(S, b)), b).transpose()), b);
    return Measure{std::abs(X.trace()), S.norm() * std::pow(b.norm(), 3)};
  });
  add("cross_adjoint", "<a x b, c> = -<a, c x b>", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec(), c = s.vec();
    return compare(cross(a, b).dot(c), -a.dot(cross(c, b)), a.norm() * b.norm() * c.norm());
  });
  add("devsym_anti_cross", "dev sym(anti(a) x b) = sym(a (x) b) - <a,b>/3 id", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    return compare(devsym(Mat3d(cross(anti(a), b))), Mat3d(sym(dyad(a, b)) - a.dot(b) / 3.0 * id3()));
  });
  add("devsym_anti_cross_norm", "|dev sym(anti(a) x b)|^2 = |a|^2 |b|^2 / 2 + <a,b>^2 / 6", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    return compare(devsym(Mat3d(cross(anti(a), b))).squaredNorm(),
                   0.5 * a.squaredNorm() * b.squaredNorm() + a.dot(b) * a.dot(b) / 6.0);
  });
  add("devsym_anti_cross_bounds", "|a|^2 |b|^2 / 2 <= |dev sym(anti(a) x b)|^2 <= 2/3 |a|^2 |b|^2", [](Sampler& s) {
    const Vec3d a = s.vec(), b = s.vec();
    const double q = devsym(Mat3d(cross(anti(a), b))).squaredNorm(), ab = a.squaredNorm() * b.squaredNorm();
    const Measure lo = at_most(0.5 * ab, q), hi = at_most(q, 2.0 / 3.0 * ab);
    return Measure{lo.diff + hi.diff, ab};
  });
  add("devsym_skew_product_bounds", "|A|^2 |B|^2 / 8 <= |dev sym(A B)|^2 <= |A|^2 |B|^2 / 6 for skew A, B",
      [](Sampler& s) {
        const Mat3d A = s.skew_mat(), B = s.skew_mat();
        const double q = devsym(Mat3d(A * B)).squaredNorm(), ab = A.squaredNorm() * B.squaredNorm();
        const Measure lo = at_most(ab / 8.0, q), hi = at_most(q, ab / 6.0);
        return Measure{lo.diff + hi.diff, ab};
      });
  add("devsym_cross_split", "dev sym(P x b) = sym(P x b) + 2/3 <axl skew P, b> id", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d b = s.vec();
    const Mat3d X = cross(P, b);
    return compare(devsym(X), Mat3d(sym(X) + (2.0 / 3.0) * axl(Mat3d(skew(P))).dot(b) * id3()));
  });
  add("cross_annihilates_b", "(P x b) b = 0", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d b = s.vec();
    return Measure{(cross(P, b) * b).norm(), P.norm() * b.squaredNorm()};
  });
  add("sym_from_devsym", "|b|^2 sym(P x b) = |b|^2 dev sym(P x b) - <b, dev sym(P x b) b> id", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d b = s.vec();
    const Mat3d X = cross(P, b), D = devsym(X);
    return compare(Mat3d(b.squaredNorm() * sym(X)), Mat3d(b.squaredNorm() * D - b.dot(D * b) * id3()));
  });
  add("devsym_sym_equivalence", "|dev sym(P x b)| <= |sym(P x b)| <= (1 + sqrt 3) |dev sym(P x b)|", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d b = s.vec();
    const Mat3d X = cross(P, b);
    const double d = devsym(X).norm(), y = sym(X).norm();
    return Measure{at_most(d, y).diff + at_most(y, (1.0 + std::sqrt(3.0)) * d).diff, y};
  });
  add("dev_cross_equivalence", "|dev(P x nu)| <= |P x nu| <= (1 + sqrt 3) |dev(P x nu)|", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d nu = s.unit();
    const Mat3d X = cross(P, nu);
    const double d = dev(X).norm(), y = X.norm();
    return Measure{at_most(d, y).diff + at_most(y, (1.0 + std::sqrt(3.0)) * d).diff, y};
  });
  add("tangential_projector", "P_nu = id - nu (x) nu = -anti(nu)^2 = anti(nu)^T anti(nu)", [](Sampler& s) {
    const Vec3d nu = s.unit();
    const Mat3d T = tangential_projector(nu), W = anti(nu);
    return Measure{(T + W * W).norm() + (T - W.transpose() * W).norm(), 1.0};
  });
  add("projector_cross", "nu x P_nu = P_nu x nu = anti(nu)", [](Sampler& s) {
    const Vec3d nu = s.unit();
    const Mat3d T = tangential_projector(nu);
    return Measure{(cross(T, nu, Side::Left) - anti(nu)).norm() + (cross(T, nu) - anti(nu)).norm(), 1.0};
  });
  add("projector_pairing", "<P x nu, H> = -<P, H x nu> = -<P P_nu, H x nu>", [](Sampler& s) {
    const Mat3d P = s.mat(), H = s.mat();
    const Vec3d nu = s.unit();
    const double l = pair(Mat3d(cross(P, nu)), H);
    return Measure{std::abs(l + pair(P, Mat3d(cross(H, nu)))) +
                       std::abs(l + pair(Mat3d(P * tangential_projector(nu)), Mat3d(cross(H, nu)))),
                   P.norm() * H.norm()};
  });
  add("projector_norm", "|P P_nu|^2 = |P x nu|^2 = |P|^2 - |P nu|^2", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d nu = s.unit();
    const double a = (P * tangential_projector(nu)).squaredNorm(), b = cross(P, nu).squaredNorm();
    return Measure{std::abs(a - b) + std::abs(b - (P.squaredNorm() - (P * nu).squaredNorm())), P.squaredNorm()};
  });
  add("sym_cross_kernel", "sym((P + alpha id) x nu) = sym(P x nu)", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d nu = s.unit();
    const double alpha = s.scalar();
    return compare(sym(Mat3d(cross(Mat3d(P + alpha * id3()), nu))), sym(Mat3d(cross(P, nu))));
  });
  add("axial_recovery", "a = recover(dev sym(anti(a) x b), b)", [](Sampler& s) {
    const Vec3d a = s.vec();
    Vec3d b;
    do b = s.vec();
    while (b.norm() < 0.1);
    const Vec3d r = recover_axial(devsym(Mat3d(cross(anti(a), b))), b);
    return compare(r, a);
  });
  add("orthogonal_split", "X = dev sym X + skew X + tr(X)/3 id, parts mutually orthogonal", [](Sampler& s) {
    const Mat3d X = s.mat();
    const auto p = orth_decompose(X);
    const Mat3d sph = p.sphere_part * id3();
    return Measure{(p.reassemble() - X).norm() + std::abs(pair(p.devsym_part, p.skew_part)) +
                       std::abs(pair(p.devsym_part, sph)) + std::abs(pair(p.skew_part, sph)),
                   X.squaredNorm()};
  });
  add("rotation_equivariance", "dev sym((R P R^T) x (R b)) = R dev sym(P x b) R^T", [](Sampler& s) {
    const Mat3d P = s.mat();
    const Vec3d b = s.vec();
    const Vec3d q = s.vec();
    const Mat3d R = rotation_from_quaternion(s.scalar() + 2.0, q(0), q(1), q(2));
    return compare(devsym(Mat3d(cross(Mat3d(R * P * R.transpose()), Vec3d(R * b)))),
                   Mat3d(R * devsym(Mat3d(cross(P, b))) * R.transpose()));
  });
  return c;
}

inline GridField op(const GridField& f, DiffOp d) { return apply_operator(f, d); }
inline GridField zero_like(const GridField& f) { return GridField::zeros(f.grid(), f.rank()); }

/// Random band-limited fields for one spectral sample.
struct FieldSource {
  GridSpec grid;
  int band;
  Sampler& s;

  GridField general() { return random_bandlimited(grid, s.next_seed(), band, 2, Structure::General); }
  GridField symmetric() { return random_bandlimited(grid, s.next_seed(), band, 2, Structure::Sym); }
  GridField skewf() { return random_bandlimited(grid, s.next_seed(), band, 2, Structure::Skew); }
  GridField vector() { return random_bandlimited(grid, s.next_seed(), band, 1); }
  GridField scalar() { return random_bandlimited(grid, s.next_seed(), band, 0); }
};

inline std::vector<IdentityCase> spectral_cases(const SuiteConfig& cfg) {
  std::vector<IdentityCase> c;
  const GridSpec grid(cfg.grid_n);
  const int band = cfg.band();
  if (band > cfg.grid_n / 2 - 1) throw Error(ErrorCode::BandTooWide, "spectral band must lie below n/2");
  auto add = [&](std::string name, std::string ref, std::function<Measure(FieldSource&)> fn) {
    c.push_back({std::move(name), std::move(ref), IdentityKind::Spectral, [grid, band, fn](Sampler& s) {
                   FieldSource src{grid, band, s};
                   return fn(src);
                 }});
  };
  using D = DiffOp;

  add("curl_grad", "curl grad zeta = 0", [](FieldSource& f) {
    const GridField g = op(f.scalar(), D::Grad);
    return compare(op(g, D::CurlVec), zero_like(g), g.coefficient_norm());
  });
  add("div_curl", "div curl a = 0", [](FieldSource& f) {
    const GridField c1 = op(f.vector(), D::CurlVec);
    return compare(op(c1, D::Div), GridField::zeros(c1.grid(), 0), c1.coefficient_norm());
  });
  add("div_trace_grad", "div a = tr(D a)", [](FieldSource& f) {
    const GridField a = f.vector();
    return compare(op(a, D::Div), trace(op(a, D::Grad)));
  });
  add("skew_grad_curl", "2 skew(D a) = anti(curl a)", [](FieldSource& f) {
    const GridField a = f.vector();
    return compare(2.0 * skew(op(a, D::Grad)), anti(op(a, D::CurlVec)));
  });
  add("div_spherical", "Div(zeta id) = grad zeta", [](FieldSource& f) {
    const GridField z = f.scalar();
    return compare(op(spherical(z), D::Div), op(z, D::Grad));
  });
  add("div_anti", "Div anti(a) = -curl a", [](FieldSource& f) {
    const GridField a = f.vector();
    return compare(op(anti(a), D::Div), -1.0 * op(a, D::CurlVec));
  });
  add("div_grad", "Div(D a) = Laplace a", [](FieldSource& f) {
    const GridField a = f.vector();
    return compare(op(op(a, D::Grad), D::Div), op(a, D::Laplacian));
  });
  add("div_grad_transpose", "Div((D a)^T) = grad div a = Laplace a + curl curl a", [](FieldSource& f) {
    const GridField a = f.vector();
    const GridField lhs = op(transpose(op(a, D::Grad)), D::Div);
    const Measure m1 = compare(lhs, op(op(a, D::Div), D::Grad));
    const Measure m2 = compare(lhs, op(a, D::Laplacian) + op(op(a, D::CurlVec), D::CurlVec));
    return Measure{m1.diff + m2.diff, std::max(m1.scale, m2.scale)};
  });
  add("curl_spherical", "Curl(zeta id) = -anti(grad zeta)", [](FieldSource& f) {
    const GridField z = f.scalar();
    return compare(op(spherical(z), D::CurlMat), -1.0 * anti(op(z, D::Grad)));
  });
  add("curl_grad_matrix", "Curl(D a) = 0", [](FieldSource& f) {
    const GridField g = op(f.vector(), D::Grad);
    return compare(op(g, D::CurlMat), zero_like(g), g.coefficient_norm());
  });
  add("curl_grad_transpose",
      "Curl((D a)^T) / 2 = Curl(sym D a) = -Curl(skew D a) = (D curl a)^T / 2", [](FieldSource& f) {
        const GridField a = f.vector();
        const GridField g = op(a, D::Grad);
        const GridField lhs = 0.5 * op(transpose(g), D::CurlMat);
        const GridField rhs = 0.5 * transpose(op(op(a, D::CurlVec), D::Grad));
        const Measure m1 = compare(lhs, op(sym(g), D::CurlMat));
        const Measure m2 = compare(lhs, -1.0 * op(skew(g), D::CurlMat));
        const Measure m3 = compare(lhs, rhs);
        return Measure{m1.diff + m2.diff + m3.diff, std::max({m1.scale, m2.scale, m3.scale})};
      });
  add("nye_anti", "Curl anti(a) = div a id - (D a)^T", [](FieldSource& f) {
    const GridField a = f.vector();
    return compare(op(anti(a), D::CurlMat), spherical(op(a, D::Div)) - transpose(op(a, D::Grad)));
  });
  add("nye_inverse", "D axl A = tr(Curl A)/2 id - (Curl A)^T", [](FieldSource& f) {
    const GridField A = f.skewf();
    const GridField C = op(A, D::CurlMat);
    return compare(op(axl(A), D::Grad), 0.5 * spherical(trace(C)) - transpose(C));
  });
  add("trace_curl_skew", "tr(Curl A) = 2 div axl A", [](FieldSource& f) {
    const GridField A = f.skewf();
    return compare(trace(op(A, D::CurlMat)), 2.0 * op(axl(A), D::Div));
  });
  add("trace_curl_sym", "tr(Curl S) = 0", [](FieldSource& f) {
    const GridField S = f.symmetric();
    const GridField C = op(S, D::CurlMat);
    return compare(trace(C), GridField::zeros(C.grid(), 0), C.coefficient_norm());
  });
  add("inc_spherical", "inc(zeta id) = Laplace zeta id - D^2 zeta", [](FieldSource& f) {
    const GridField z = f.scalar();
    return compare(op(spherical(z), D::Inc), spherical(op(z, D::Laplacian)) - op(op(z, D::Grad), D::Grad));
  });
  add("inc_grad", "inc((D a)^T) = inc(sym D a) = inc(skew D a) = 0", [](FieldSource& f) {
    const GridField g = op(f.vector(), D::Grad);
    const GridField z = zero_like(g);
    const Measure m1 = compare(op(transpose(g), D::Inc), z, g.coefficient_norm());
    const Measure m2 = compare(op(sym(g), D::Inc), z, g.coefficient_norm());
    const Measure m3 = compare(op(skew(g), D::Inc), z, g.coefficient_norm());
    return Measure{m1.diff + m2.diff + m3.diff, std::max({m1.scale, m2.scale, m3.scale})};
  });
  add("inc_anti", "inc(anti(a)) = -anti(grad div a)", [](FieldSource& f) {
    const GridField a = f.vector();
    return compare(op(anti(a), D::Inc), -1.0 * anti(op(op(a, D::Div), D::Grad)));
  });
  add("inc_sym_trace", "inc S is symmetric and tr(inc S) = Laplace tr S - div Div S", [](FieldSource& f) {
    const GridField S = f.symmetric();
    const GridField I = op(S, D::Inc);
    const Measure m1 = compare(I, transpose(I));
    const Measure m2 = compare(trace(I), op(trace(S), D::Laplacian) - op(op(S, D::Div), D::Div));
    return Measure{m1.diff + m2.diff, std::max(m1.scale, m2.scale)};
  });
  add("dev_curl", "dev Curl P = Curl P - 2/3 div axl skew P id", [](FieldSource& f) {
    const GridField P = f.general();
    const GridField C = op(P, D::CurlMat);
    return compare(dev(C), C - (2.0 / 3.0) * spherical(op(axl(skew(P)), D::Div)));
  });
  add("inc_symmetry", "(inc P)^T = inc(P^T), sym inc P = inc sym P, skew inc P = inc skew P", [](FieldSource& f) {
    const GridField P = f.general();
    const GridField I = op(P, D::Inc);
    const Measure m1 = compare(transpose(I), op(transpose(P), D::Inc));
    const Measure m2 = compare(sym(I), op(sym(P), D::Inc));
    const Measure m3 = compare(skew(I), op(skew(P), D::Inc));
    return Measure{m1.diff + m2.diff + m3.diff, std::max({m1.scale, m2.scale, m3.scale})};
  });
  add("trace_inc_curl_sym", "tr(inc Curl S) = 0", [](FieldSource& f) {
    const GridField I = op(op(f.symmetric(), D::CurlMat), D::Inc);
    return compare(trace(I), GridField::zeros(I.grid(), 0), I.coefficient_norm());
  });
  add("nye_sym", "sym(D axl A) = tr(sym Curl A)/2 id - sym Curl A", [](FieldSource& f) {
    const GridField A = f.skewf();
    const GridField SC = op(A, D::SymCurl);
    return compare(sym(op(axl(A), D::Grad)), 0.5 * spherical(trace(SC)) - SC);
  });
  add("hessian_trace_axl", "D^2 tr(D axl A) = 3/2 tr(inc dev sym Curl A) id - 3 inc dev sym Curl A",
      [](FieldSource& f) {
        const GridField A = f.skewf();
        const GridField lhs = op(op(trace(op(axl(A), D::Grad)), D::Grad), D::Grad);
        const GridField I = op(op(A, D::DevSymCurl), D::Inc);
        return compare(lhs, 1.5 * spherical(trace(I)) - 3.0 * I);
      });
  add("sym_curl_kernel", "sym Curl(zeta id + D u) = 0", [](FieldSource& f) {
    const GridField P = spherical(f.scalar()) + op(f.vector(), D::Grad);
    return compare(op(P, D::SymCurl), zero_like(P), P.coefficient_norm());
  });
  add("inc_skew_grad_kernel", "inc(sym D u) = 0 and inc(skew D v) = 0", [](FieldSource& f) {
    const GridField gu = op(f.vector(), D::Grad), gv = op(f.vector(), D::Grad);
    const GridField lhs = op(sym(gu), D::Inc) + op(skew(gv), D::Inc);
    return compare(lhs, zero_like(lhs), gu.coefficient_norm() + gv.coefficient_norm());
  });
  return c;
}

inline std::vector<IdentityCase> box_cases(const SuiteConfig& cfg) {
  std::vector<IdentityCase> c;
  const BoxDomain box = cfg.box;
  auto add = [&](std::string name, std::string ref, std::function<Measure(Sampler&)> fn) {
    c.push_back({std::move(name), std::move(ref), IdentityKind::Box, std::move(fn)});
  };
  add("dev_curl_anti_x", "Curl(alpha anti(x)) = 2 alpha id, so dev Curl(alpha anti(x)) = 0", [box](Sampler& s) {
    const double alpha = s.scalar();
    const Vec3d x = s.point_in(box);
    const Mat3d C = fd::curl([alpha](const Vec3d& y) { return Mat3d(alpha * anti(y)); }, x);
    return Measure{(C - 2.0 * alpha * id3()).norm() + dev(C).norm(), std::abs(alpha)};
  });
  add("inc_anti_x", "inc(alpha anti(x)) = 0", [box](Sampler& s) {
    const double alpha = s.scalar();
    const Vec3d x = s.point_in(box);
    auto curlT = [alpha](const Vec3d& y) {
      return Mat3d(fd::curl([alpha](const Vec3d& z) { return Mat3d(alpha * anti(z)); }, y, 1e-3).transpose());
    };
    return Measure{fd::curl(curlT, x, 1e-3).norm(), std::abs(alpha)};
  });
  add("kernel_curl_closed_form", "Curl anti(A~x + beta x + b + <d,x>x - d|x|^2/2) = 2(beta + <d,x>) id + A~ + anti(d x x)",
      [box](Sampler& s) {
        const KernelElement e{s.vec(), s.scalar(), s.vec(), s.vec()};
        const Vec3d x = s.point_in(box);
        const Mat3d C = fd::curl([&e](const Vec3d& y) { return eval_kernel(e, y); }, x);
        return compare(C, curl_kernel_closed_form(e, x));
      });
  add("kernel_devsym_curl", "dev sym Curl T = 0 for T in the kernel", [box](Sampler& s) {
    const KernelElement e{s.vec(), s.scalar(), s.vec(), s.vec()};
    const Vec3d x = s.point_in(box);
    const Mat3d C = fd::curl([&e](const Vec3d& y) { return eval_kernel(e, y); }, x);
    return Measure{devsym(C).norm(), C.norm()};
  });
  add("conformal_killing", "dev sym D phi = 0 for phi = <a,x>x - a|x|^2/2 + Ax + beta x + b", [box](Sampler& s) {
    const ConformalKilling phi{s.vec(), s.vec(), s.scalar(), s.vec()};
    const Vec3d x = s.point_in(box);
    const Mat3d J = fd::jacobian(phi, x);
    return Measure{devsym(J).norm() + (J - phi.jacobian(x)).norm(), J.norm()};
  });
  add("halfspace_curl", "Curl P_k = -exp(k<xi,x>)(eta P x xi + P anti(grad eta)/k)", [](Sampler& s) {
    const int k = 3;
    Vec3d x = 2.0 * s.vec();
    x(0) = -std::abs(x(0));
    if (x.norm() >= 1.95) x *= 1.9 / x.norm();
    const Mat3c C = fd::curl([k](const Vec3d& y) { return halfspace_field(k, y); }, x);
    return compare(C, halfspace_curl(k, x));
  });
  return c;
}

}  // namespace detail

/// Every identity of the suite, in report order.
inline std::vector<IdentityCase> identity_cases(const SuiteConfig& cfg) {
  std::vector<IdentityCase> all = detail::pointwise_cases();
  for (auto& c : detail::spectral_cases(cfg)) all.push_back(std::move(c));
  for (auto& c : detail::box_cases(cfg)) all.push_back(std::move(c));
  return all;
}

/// Runs every identity on its own deterministic random stream; the result
/// order and values do not depend on the thread count.
inline std::vector<IdentityResult> run_identity_suite(const SuiteConfig& cfg) {
  if (cfg.samples < 1) throw Error(ErrorCode::UsageError, "samples must be positive");
  const std::vector<IdentityCase> cases = identity_cases(cfg);
  std::vector<IdentityResult> out(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const IdentityCase& c = cases[i];
    IdentityResult& r = out[i];
    r.name = c.name;
    r.reference = c.reference;
    r.kind = c.kind;
    r.tolerance = default_tolerance(c.kind);
    r.samples = c.kind == IdentityKind::Spectral ? cfg.field_samples() : cfg.samples;
    Sampler s(cfg.seed, i);
    try {
      for (int j = 0; j < r.samples; ++j) {
        const double res = c.check(s).residual();
        r.max_residual = std::isfinite(res) ? std::max(r.max_residual, res) : std::numeric_limits<double>::infinity();
      }
      r.passed = r.max_residual < r.tolerance;
    } catch (const std::exception& e) {
      r.error = e.what();
      r.passed = false;
    }
  });
  return out;
}

}  // namespace kornlab
