#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "kornlab/algebra3.hpp"
#include "kornlab/error.hpp"

namespace kornlab {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// m-point Gauss-Legendre rule on [-1, 1] (Newton iteration on the
/// three-term recurrence).
inline GaussRule gauss_legendre(int m) {
  GaussRule rule;
  if (m == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  return rule;
}

/// Rule mapped to [a, b].
inline GaussRule gauss_legendre(int m, double a, double b) {
  GaussRule rule = gauss_legendre(m);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

/// Axis-aligned box with a tensor Gauss-Legendre rule.
struct BoxDomain {
  Vec3d lower = Vec3d::Constant(-1.0);
  Vec3d upper = Vec3d::Constant(1.0);
  std::array<int, 3> points{64, 64, 64};

  BoxDomain() = default;
  BoxDomain(const Vec3d& lo, const Vec3d& hi, int points_per_axis)
      : lower(lo), upper(hi), points{points_per_axis, points_per_axis, points_per_axis} {
    validate();
  }

  void validate() const {
    for (int d = 0; d < 3; ++d) {
      if (!(lower(d) < upper(d))) throw Error(ErrorCode::UsageError, "box requires lower < upper componentwise");
      if (points[d] < 1) throw Error(ErrorCode::UsageError, "box quadrature needs at least one point per axis");
    }
  }

  double volume() const { return (upper - lower).prod(); }
};

inline void check_exponent(double p) {
  if (!(p >= 1.0 && p <= 64.0)) throw Error(ErrorCode::BadExponent, "p must lie in [1, 64]");
}

/// L^p norm over a box of a pointwise magnitude |f(x)|.
template <class F>
double lp_norm(const BoxDomain& box, double p, F&& magnitude) {
  check_exponent(p);
  box.validate();
  std::array<GaussRule, 3> rules;
  for (int d = 0; d < 3; ++d) rules[d] = gauss_legendre(box.points[d], box.lower(d), box.upper(d));
  double sum = 0.0;
  for (int i = 0; i < box.points[0]; ++i)
    for (int j = 0; j < box.points[1]; ++j)
      for (int l = 0; l < box.points[2]; ++l) {
        const Vec3d x(rules[0].nodes[i], rules[1].nodes[j], rules[2].nodes[l]);
        const double w = rules[0].weights[i] * rules[1].weights[j] * rules[2].weights[l];
        sum += w * std::pow(std::abs(magnitude(x)), p);
      }
  return std::pow(sum, 1.0 / p);
}

}  // namespace kornlab
