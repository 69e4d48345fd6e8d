#pragma once
//
// Quadrature experiments on non-periodic test objects: the polynomial ratio
// k |q_{k-1}| / |q_k| for q_k = z^k, z = x1 + i x2, on a box, and the
// seminorm ratio |sym Curl P_k| / |dev sym Curl P_k| for the cut-off
// exponential family built on the complex kernel witness.
//
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "kornlab/algebra3.hpp"
#include "kornlab/error.hpp"
#include "kornlab/parallel.hpp"
#include "kornlab/quadrature.hpp"
#include "kornlab/symbol.hpp"

namespace kornlab {

struct Refinement {
  static constexpr int start = 64;
  static constexpr int cap = 1024;
  static constexpr double drift = 1e-3;
};

struct RatioResult {
  double ratio = 0.0;
  double numerator = 0.0;    // L^p norm (or seminorm) on top
  double denominator = 0.0;  // L^p norm (or seminorm) below
  int points = 0;            // resolution at which the drift test passed
  double drift = 0.0;        // relative change against the previous resolution
};

namespace detail {

/// Doubles the resolution until `eval(m)` changes by less than the drift
/// tolerance relative to `eval(m / 2)`.
template <class Eval>
RatioResult refine(Eval&& eval, const char* what) {
  RatioResult prev = eval(Refinement::start);
  for (int m = 2 * Refinement::start; m <= Refinement::cap; m *= 2) {
    RatioResult cur = eval(m);
    const double change = std::abs(cur.ratio - prev.ratio) / std::abs(cur.ratio);
    cur.points = m;
    cur.drift = change;
    if (change < Refinement::drift) return cur;
    prev = cur;
  }
  throw Error(ErrorCode::UnderResolved, std::string(what) + " did not settle below 0.1% drift by 1024 points");
}

}  // namespace detail

/// k |z^{k-1}|_p / |z^k|_p over the box. Powers are evaluated on z / R with R
/// the largest corner modulus, so large k never overflows.
inline RatioResult growth_ratio(int k, double p, const BoxDomain& box) {
  if (k < 1) throw Error(ErrorCode::UsageError, "growth_ratio needs k >= 1");
  check_exponent(p);
  box.validate();
  double R = 0.0;
  for (double x : {box.lower(0), box.upper(0)})
    for (double y : {box.lower(1), box.upper(1)}) R = std::max(R, std::hypot(x, y));
  const double height = box.upper(2) - box.lower(2);

  auto eval = [&](int m) {
    const GaussRule gx = gauss_legendre(m, box.lower(0), box.upper(0));
    const GaussRule gy = gauss_legendre(m, box.lower(1), box.upper(1));
    std::vector<double> lower_row(m), upper_row(m);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
      double lo = 0.0, hi = 0.0;
      for (int j = 0; j < m; ++j) {
        const double w = gx.weights[i] * gy.weights[j];
        const double mod = std::hypot(gx.nodes[i], gy.nodes[j]) / R;
        lo += w * std::pow(mod, p * (k - 1));
        hi += w * std::pow(mod, p * k);
      }
      lower_row[i] = lo;
      upper_row[i] = hi;
    });
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < m; ++i) {
      lo += lower_row[i];
      hi += upper_row[i];
    }
    RatioResult r;
    // norms of (z/R)^{k-1} and (z/R)^k; the R factors are restored in the ratio
    r.numerator = k * std::pow(lo * height, 1.0 / p) * std::pow(R, k - 1);
    r.denominator = std::pow(hi * height, 1.0 / p) * std::pow(R, k);
    r.ratio = (k / R) * std::pow(lo / hi, 1.0 / p);
    r.points = m;
    return r;
  };
  return detail::refine(eval, "growth_ratio");
}

// ---------------------------------------------------------------------------
// Half-space family P_k = (1/k) P_hat exp(k <xi, x>) eta(x) on {x1 < 0}.

/// Smooth radial cutoff: 1 on |x| <= 1, 0 on |x| >= 2.
struct Cutoff {
  static double h(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
  static double dh(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

  static double value(double r) {
    const double a = h(2.0 - r), b = h(r - 1.0);
    return a / (a + b);
  }

  static double derivative(double r) {
    const double a = h(2.0 - r), b = h(r - 1.0);
    const double da = -dh(2.0 - r), db = dh(r - 1.0);
    const double s = a + b;
    return (da * b - a * db) / (s * s);
  }

  static Vec3d gradient(const Vec3d& x) {
    const double r = x.norm();
    if (r <= 1.0 || r >= 2.0) return Vec3d::Zero();
    return derivative(r) / r * x;
  }
};

inline Mat3c halfspace_field(int k, const Vec3d& x) {
  static const KernelWitness w = complex_kernel_witness();
  const cplx phase = std::exp(double(k) * pair(w.xi, to_complex(x)));
  return (phase * Cutoff::value(x.norm()) / double(k)) * w.p_hat;
}

/// Curl P_k(x) = -exp(k<xi,x>) (eta P_hat x xi + (1/k) P_hat anti(grad eta)).
inline Mat3c halfspace_curl(int k, const Vec3d& x) {
  static const KernelWitness w = complex_kernel_witness();
  const cplx phase = std::exp(double(k) * pair(w.xi, to_complex(x)));
  const Mat3c first = Cutoff::value(x.norm()) * cross(w.p_hat, w.xi, Side::Right);
  const Mat3c second = (1.0 / k) * (w.p_hat * anti(to_complex(Cutoff::gradient(x))));
  return -phase * (first + second);
}

/// |sym Curl P_k|_p / |dev sym Curl P_k|_p over {x1 < 0} intersected with
/// B(0, 2), integrated in spherical coordinates about -e1 with u = -x1 / r.
/// The u panels are graded geometrically towards the plane x1 = 0, where
/// exp(k x1) concentrates.
inline RatioResult halfspace_ratio(int k, double p) {
  if (k < 1) throw Error(ErrorCode::UsageError, "halfspace_ratio needs k >= 1");
  check_exponent(p);

  std::vector<double> u_breaks{0.0};
  for (double c = 1.0 / (2.0 * p * k); c < 1.0; c *= 4.0) u_breaks.push_back(c);
  u_breaks.push_back(1.0);
  const int u_panels = static_cast<int>(u_breaks.size()) - 1;

  auto eval = [&](int m) {
    const int per_r = m / 2;
    const int per_u = std::max(8, m / 4);
    std::vector<double> r_nodes, r_weights, u_nodes, u_weights;
    for (double a : {0.0, 1.0}) {
      const GaussRule g = gauss_legendre(per_r, a, a + 1.0);
      r_nodes.insert(r_nodes.end(), g.nodes.begin(), g.nodes.end());
      r_weights.insert(r_weights.end(), g.weights.begin(), g.weights.end());
    }
    for (int j = 0; j < u_panels; ++j) {
      const GaussRule g = gauss_legendre(per_u, u_breaks[j], u_breaks[j + 1]);
      u_nodes.insert(u_nodes.end(), g.nodes.begin(), g.nodes.end());
      u_weights.insert(u_weights.end(), g.weights.begin(), g.weights.end());
    }
    const int n_phi = m;
    const double dphi = 2.0 * std::numbers::pi / n_phi;

    std::vector<double> top(r_nodes.size()), bottom(r_nodes.size());
    parallel_for(r_nodes.size(), [&](std::size_t ir) {
      const double r = r_nodes[ir];
      double t = 0.0, b = 0.0;
      for (std::size_t iu = 0; iu < u_nodes.size(); ++iu) {
        const double u = u_nodes[iu];
        const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (int ip = 0; ip < n_phi; ++ip) {
          const double phi = ip * dphi;
          const Vec3d x(-r * u, r * s * std::cos(phi), r * s * std::sin(phi));
          const Mat3c C = halfspace_curl(k, x);
          const double w = r_weights[ir] * u_weights[iu] * dphi * r * r;
          t += w * std::pow(norm(Mat3c(sym(C))), p);
          b += w * std::pow(norm(Mat3c(devsym(C))), p);
        }
      }
      top[ir] = t;
      bottom[ir] = b;
    });
    double t = 0.0, b = 0.0;
    for (std::size_t i = 0; i < r_nodes.size(); ++i) {
      t += top[i];
      b += bottom[i];
    }
    RatioResult res;
    res.numerator = std::pow(t, 1.0 / p);
    res.denominator = std::pow(b, 1.0 / p);
    res.ratio = res.numerator / res.denominator;
    res.points = m;
    return res;
  };
  return detail::refine(eval, "halfspace_ratio");
}

}  // namespace kornlab
