#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "kornlab/growth.hpp"
#include "kornlab/identities.hpp"
#include "oracles.hpp"

using namespace kornlab;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <class E>
ErrorCode code_of(E&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvariantViolation;
}

}  // namespace

TEST(GridSpec, RejectsBadSizes) {
  EXPECT_EQ(code_of([] { GridSpec(7); }), ErrorCode::BadGrid);
  EXPECT_EQ(code_of([] { GridSpec(2); }), ErrorCode::BadGrid);
  const GridSpec g(8);
  EXPECT_EQ(g.points(), 512u);
  EXPECT_EQ(g.frequency(7), -1);
  EXPECT_EQ(g.flat_of_frequency(g.frequency_of(77)), 77u);
}

TEST(GridField, TransformRoundTrip) {
  const GridSpec g(8);
  const GridField f = random_bandlimited(g, 3, 3);
  const GridField h = GridField::from_samples(g, 2, f.samples(), Reality::Real);
  EXPECT_LT(max_abs_diff(f.coefficients(), h.coefficients()), 1e-14);
  EXPECT_LT(f.max_conjugate_asymmetry(), 1e-12);
}

TEST(ApplyOperator, CurlOfConstantVanishes) {
  const GridSpec g(8);
  Mat3d C;
  C << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const GridField f = GridField::from_function(g, 2, [&](const Vec3d&) { return C; });
  EXPECT_LT(apply_operator(f, DiffOp::CurlMat).coefficient_norm(), 1e-14);
}

TEST(ApplyOperator, CurlOfAntiSine) {
  const GridSpec g(16);
  const GridField A =
      GridField::from_function(g, 2, [](const Vec3d& x) { return anti(Vec3d(0.0, 0.0, std::sin(x(0)))); });
  const GridField expected = GridField::from_function(g, 2, [](const Vec3d& x) {
    Mat3d M = Mat3d::Zero();
    M(0, 2) = -std::cos(x(0));
    return M;
  });
  EXPECT_LT((apply_operator(A, DiffOp::CurlMat) - expected).coefficient_norm(), 1e-14);
}

TEST(ApplyOperator, IncOfSphericalCosine) {
  const GridSpec g(16);
  const GridField f =
      GridField::from_function(g, 2, [](const Vec3d& x) { return Mat3d(std::cos(x(1)) * Mat3d::Identity()); });
  const GridField expected = GridField::from_function(
      g, 2, [](const Vec3d& x) { return Mat3d(-std::cos(x(1)) * Vec3d(1, 0, 1).asDiagonal().toDenseMatrix()); });
  EXPECT_LT((apply_operator(f, DiffOp::Inc) - expected).coefficient_norm(), 1e-14);
}

TEST(ApplyOperator, GradDivCurlAgreeWithClosedForms) {
  const GridSpec g(16);
  const GridField u = GridField::from_function(g, 0, [](const Vec3d& x) { return std::sin(x(0)) * std::cos(2 * x(2)); });
  const GridField grad = GridField::from_function(g, 1, [](const Vec3d& x) {
    return Vec3d(std::cos(x(0)) * std::cos(2 * x(2)), 0.0, -2.0 * std::sin(x(0)) * std::sin(2 * x(2)));
  });
  EXPECT_LT((apply_operator(u, DiffOp::Grad) - grad).coefficient_norm(), 1e-13);
  const GridField lap = GridField::from_function(g, 0, [](const Vec3d& x) { return -5.0 * std::sin(x(0)) * std::cos(2 * x(2)); });
  EXPECT_LT((apply_operator(grad, DiffOp::Div) - lap).coefficient_norm(), 1e-13);
  EXPECT_LT((apply_operator(u, DiffOp::Laplacian) - lap).coefficient_norm(), 1e-13);

  const GridField v = GridField::from_function(g, 1, [](const Vec3d& x) { return Vec3d(0.0, std::sin(x(0)), 0.0); });
  const GridField curl = GridField::from_function(g, 1, [](const Vec3d& x) { return Vec3d(0.0, 0.0, std::cos(x(0))); });
  EXPECT_LT((apply_operator(v, DiffOp::CurlVec) - curl).coefficient_norm(), 1e-13);
}

TEST(ApplyOperator, RankMismatch) {
  const GridSpec g(8);
  const GridField s = GridField::zeros(g, 0);
  EXPECT_EQ(code_of([&] { apply_operator(s, DiffOp::CurlMat); }), ErrorCode::RankMismatch);
  EXPECT_EQ(code_of([&] { apply_operator(s, DiffOp::Div); }), ErrorCode::RankMismatch);
  EXPECT_EQ(code_of([&] { slots_for_rank(3); }), ErrorCode::RankMismatch);
}

TEST(LpNorm, TorusExamples) {
  const GridSpec g(16);
  const GridField c = GridField::from_function(g, 0, [](const Vec3d&) { return 2.5; });
  for (double p : {1.0, 2.0, 3.5}) EXPECT_NEAR(lp_norm(c, p), 2.5 * std::pow(2 * kPi, 3.0 / p), 1e-10);
  const GridField s = GridField::from_function(g, 0, [](const Vec3d& x) { return std::sin(x(0)); });
  EXPECT_NEAR(lp_norm(s, 2.0), std::sqrt(4 * kPi * kPi * kPi), 1e-10);
  EXPECT_EQ(code_of([&] { lp_norm(s, 0.5); }), ErrorCode::BadExponent);
}

TEST(LpNorm, BoxGaussLegendre) {
  const BoxDomain box(Vec3d(-1, -1, -1), Vec3d(1, 2, 1), 8);
  EXPECT_NEAR(lp_norm(box, 2.0, [](const Vec3d& x) { return x(0); }), std::sqrt(2.0 / 3.0 * 3.0 * 2.0), 1e-13);
  EXPECT_NEAR(lp_norm(box, 1.0, [](const Vec3d&) { return 1.0; }), box.volume(), 1e-13);
}

TEST(RandomBandlimited, DeterministicStructuredAndBanded) {
  const GridSpec g(16);
  const GridField a = random_bandlimited(g, 42, 4);
  const GridField b = random_bandlimited(g, 42, 4);
  EXPECT_EQ(a.coefficients(), b.coefficients());
  EXPECT_NE(a.coefficients(), random_bandlimited(g, 43, 4).coefficients());
  for (std::size_t flat = 0; flat < g.points(); ++flat) {
    if (g.frequency_of(flat).cwiseAbs().maxCoeff() > 4) {
      EXPECT_EQ(a.matrix_coefficient(flat).norm(), 0.0);
    }
  }
  const GridField s = random_bandlimited(g, 1, 4, 2, Structure::Skew);
  EXPECT_LT(sym(s).coefficient_norm(), 1e-12);
  const GridField y = random_bandlimited(g, 1, 4, 2, Structure::Sym);
  EXPECT_LT(skew(y).coefficient_norm(), 1e-12);
  const GridField z = random_bandlimited(g, 1, 4, 2, Structure::SkewPlusSpherical);
  EXPECT_LT(devsym(z).coefficient_norm(), 1e-12);

  const GridField c = random_bandlimited(g, 5, 0);
  const auto samples = c.samples();
  for (std::size_t p = 1; p < g.points(); ++p)
    for (int sl = 0; sl < 9; ++sl) EXPECT_LT(std::abs(samples[p * 9 + sl] - samples[sl]), 1e-14);

  EXPECT_EQ(code_of([&] { random_bandlimited(g, 1, 8); }), ErrorCode::BandTooWide);
  EXPECT_EQ(code_of([&] { random_bandlimited(g, 1, 2, 1, Structure::Skew); }), ErrorCode::RankMismatch);
}

TEST(FieldIo, RoundTripAtSinglePrecision) {
  const GridSpec g(8);
  const GridField f = random_bandlimited(g, 9, 3);
  const auto path = (std::filesystem::temp_directory_path() / "kornlab_field_test.bin").string();
  write_field(path, f);
  const GridField h = read_field(path);
  std::filesystem::remove(path);
  EXPECT_EQ(h.rank(), 2);
  EXPECT_EQ(h.grid().n(), 8);
  EXPECT_LT(max_abs_diff(f.coefficients(), h.coefficients()), 1e-6);
  EXPECT_EQ(code_of([&] { read_field("/nonexistent/kornlab.bin"); }), ErrorCode::IoError);
  EXPECT_EQ(code_of([&] { write_field("/nonexistent/dir/kornlab.bin", f); }), ErrorCode::IoError);
}

TEST(SpectralIdentities, PassOnDefaultBand) {
  SuiteConfig cfg;
  cfg.samples = 300;
  for (const auto& r : run_identity_suite(cfg)) {
    if (r.kind != IdentityKind::Spectral) continue;
    EXPECT_TRUE(r.passed) << r.name << " " << r.max_residual;
    EXPECT_LT(r.max_residual, 1e-10) << r.name;
  }
}

TEST(SpectralIdentities, IndependentOfThreadCount) {
  SuiteConfig cfg;
  cfg.samples = 100;
  setenv("KORNLAB_THREADS", "1", 1);
  const auto one = run_identity_suite(cfg);
  setenv("KORNLAB_THREADS", "4", 1);
  const auto four = run_identity_suite(cfg);
  unsetenv("KORNLAB_THREADS");
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i].max_residual, four[i].max_residual) << one[i].name;
}

// ---------------------------------------------------------------------------
// growth on bounded domains

TEST(GrowthRatio, ClosedFormOnUnitCube) {
  const BoxDomain box;
  EXPECT_NEAR(growth_ratio(1, 2.0, box).ratio, std::sqrt(1.5), 1e-12);
  for (int k : {2, 5, 10, 37, 100}) {
    const RatioResult r = growth_ratio(k, 2.0, box);
    EXPECT_NEAR(r.ratio, oracle::growth_ratio_p2(k), 1e-9 * r.ratio) << k;
    EXPECT_LT(r.drift, 1e-3);
  }
  EXPECT_GT(growth_ratio(20, 2.0, box).ratio, growth_ratio(10, 2.0, box).ratio);
  EXPECT_GT(growth_ratio(100, 2.0, box).ratio / growth_ratio(10, 2.0, box).ratio, 3.0);
}

TEST(GrowthRatio, OtherExponentsAndBoxes) {
  const BoxDomain box(Vec3d(-0.5, 0.2, 0.0), Vec3d(1.0, 1.5, 3.0), 64);
  // p = 1 on a box, checked against the generic tensor Gauss rule
  for (int k : {3, 6}) {
    const BoxDomain fine(box.lower, box.upper, 96);
    auto mag = [](int m) {
      return [m](const Vec3d& x) { return std::pow(std::hypot(x(0), x(1)), m); };
    };
    const double expected = k * lp_norm(fine, 1.0, mag(k - 1)) / lp_norm(fine, 1.0, mag(k));
    EXPECT_NEAR(growth_ratio(k, 1.0, box).ratio, expected, 1e-8 * expected);
  }
  EXPECT_EQ(code_of([&] { growth_ratio(3, 0.5, box); }), ErrorCode::BadExponent);
}

TEST(HalfspaceRatio, MatchesFiniteDifferenceQuadrature) {
  // frozen from an independent spherical-coordinate quadrature
  EXPECT_NEAR(halfspace_ratio(2, 2.0).ratio, 2.6688414148, 1e-8);
  EXPECT_NEAR(halfspace_ratio(4, 2.0).ratio, 4.9577513482, 1e-8);
  EXPECT_NEAR(halfspace_ratio(8, 2.0).ratio, 9.7300311335, 1e-8);
  const double fd = oracle::halfspace_ratio_fd(2);
  EXPECT_NEAR(halfspace_ratio(2, 2.0).ratio, fd, 1e-3 * fd);
}

TEST(HalfspaceRatio, DenominatorScalesLikeInverseK) {
  double prev = 0.0;
  for (int k : {2, 4, 8, 16, 32}) {
    const RatioResult r = halfspace_ratio(k, 2.0);
    if (prev > 0.0) {
      EXPECT_GT(r.ratio / prev, 1.5);
    }
    prev = r.ratio;
    // dev sym seminorm times k stays bounded, while the sym seminorm decays
    // only like the volume factor of the exponential weight
    EXPECT_LT(r.denominator * k, 2.0);
  }
}

TEST(HalfspaceField, CurlIntegrandOnInnerBall) {
  Sampler s(21, 0);
  for (int i = 0; i < 200; ++i) {
    Vec3d x = 0.95 * s.unit() * std::abs(s.scalar());
    x(0) = -std::abs(x(0));
    const Mat3c C = halfspace_curl(5, x);
    EXPECT_NEAR(sym(C).norm(), std::exp(5.0 * x(0)) * std::sqrt(3.0), 1e-12);
    EXPECT_LT(devsym(C).norm(), 1e-12);
  }
}
