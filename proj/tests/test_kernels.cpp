#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kornlab/finite_difference.hpp"
#include "kornlab/identities.hpp"
#include "kornlab/kernels.hpp"
#include "oracles.hpp"

using namespace kornlab;

namespace {

KernelElement random_element(Sampler& s, KernelSpace space = KernelSpace::SdSC) {
  KernelElement e;
  e.a_tilde = s.vec();
  e.b = s.vec();
  if (space == KernelSpace::SdSC) {
    e.beta = s.scalar();
    e.d = s.vec();
  }
  return e;
}

/// Uniform points in [-1,1]^3, rejecting any draw that makes four points
/// coplanar within 1e-6.
std::vector<Vec3d> general_position(Sampler& s, int count) {
  std::vector<Vec3d> pts;
  while (static_cast<int>(pts.size()) < count) {
    const Vec3d x = s.vec();
    bool ok = true;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; ok && i < n; ++i)
      for (std::size_t j = i + 1; ok && j < n; ++j)
        for (std::size_t k = j + 1; ok && k < n; ++k)
          ok = std::abs((pts[j] - pts[i]).cross(pts[k] - pts[i]).dot(x - pts[i])) > 1e-6;
    if (ok) pts.push_back(x);
  }
  return pts;
}

}  // namespace

TEST(EvalKernel, Examples) {
  const Vec3d x(0.3, -0.2, 0.9);
  KernelElement e;
  e.b = Vec3d(1, 2, 3);
  EXPECT_EQ(eval_kernel(e, x), anti(e.b));
  e = KernelElement{};
  e.beta = 1.0;
  EXPECT_EQ(eval_kernel(e, Vec3d::UnitZ()), anti(Vec3d(Vec3d::UnitZ())));
  e = KernelElement{};
  e.d = Vec3d::UnitZ();
  EXPECT_LT((eval_kernel(e, Vec3d::UnitZ()) - oracle::anti(Vec3d(0, 0, 0.5))).norm(), 1e-15);
}

TEST(CurlKernel, ClosedFormExamplesAndStructure) {
  const Vec3d x(0.1, 0.7, -0.4);
  KernelElement e;
  e.beta = 1.0;
  EXPECT_EQ(curl_kernel_closed_form(e, x), Mat3d(2.0 * Mat3d::Identity()));
  e = KernelElement{};
  e.a_tilde = Vec3d(0.5, -1.0, 2.0);
  EXPECT_EQ(curl_kernel_closed_form(e, x), anti(e.a_tilde));

  Sampler s(31, 0);
  for (int i = 0; i < 100; ++i) {
    const KernelElement r = random_element(s);
    const Vec3d y = s.vec();
    EXPECT_EQ(sym(eval_kernel(r, y)), Mat3d::Zero());
    EXPECT_LT(devsym(curl_kernel_closed_form(r, y)).norm(), 1e-14);
    const Mat3d fd = fd::curl([&](const Vec3d& z) { return eval_kernel(r, z); }, y);
    EXPECT_LT((fd - curl_kernel_closed_form(r, y)).norm(), 1e-7);
  }
}

TEST(ConformalKilling, AxialVectorAndVanishingDevSymJacobian) {
  Sampler s(32, 0);
  for (int i = 0; i < 100; ++i) {
    const KernelElement e = random_element(s);
    const ConformalKilling phi = axial_field(e);
    const Vec3d x = s.vec();
    EXPECT_LT((axl(eval_kernel(e, x)) - phi(x)).norm(), 1e-14);
    EXPECT_LT(devsym(fd::jacobian(phi, x)).norm(), 1e-7);
    EXPECT_LT((fd::jacobian(phi, x) - phi.jacobian(x)).norm(), 1e-7);
    EXPECT_LT(devsym(phi.jacobian(x)).norm(), 1e-14);
  }
}

TEST(ProjectKernel, RecoversExactElements) {
  Sampler s(33, 0);
  for (KernelSpace space : {KernelSpace::SSC, KernelSpace::SdSC}) {
    const KernelElement e = random_element(s, space);
    std::vector<std::pair<Vec3d, Mat3d>> samples;
    for (const Vec3d& x : general_position(s, 12)) samples.emplace_back(x, eval_kernel(e, x));
    const KernelFit fit = project_kernel(samples, space);
    EXPECT_LT((fit.element.parameters(space) - e.parameters(space)).norm(), 1e-10);
    EXPECT_LT(fit.residual, 1e-10);

    // idempotence
    std::vector<std::pair<Vec3d, Mat3d>> again;
    for (const auto& [x, P] : samples) again.emplace_back(x, eval_kernel(fit.element, x));
    EXPECT_LT((project_kernel(again, space).element.parameters(space) - fit.element.parameters(space)).norm(), 1e-12);
  }
}

TEST(ProjectKernel, SymmetricPerturbationIsOrthogonal) {
  // anti(b) + S0 on a point set symmetric under x -> -x: the symmetric part
  // is invisible to the skew fit and shows up only in the residual
  Sampler s(34, 0);
  const Vec3d b(0.4, -1.1, 0.6);
  const Mat3d S0 = s.sym_mat();
  std::vector<std::pair<Vec3d, Mat3d>> samples;
  for (const Vec3d& x : general_position(s, 6)) {
    samples.emplace_back(x, anti(b) + S0);
    samples.emplace_back(-x, anti(b) + S0);
  }
  for (KernelSpace space : {KernelSpace::SSC, KernelSpace::SdSC}) {
    const KernelFit fit = project_kernel(samples, space);
    EXPECT_LT((fit.element.b - b).norm(), 1e-10);
    EXPECT_NEAR(fit.residual * fit.residual, S0.squaredNorm() * samples.size(), 1e-9);
  }
}

TEST(ProjectKernel, Errors) {
  try {
    project_kernel({}, KernelSpace::SdSC);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewSamples);
  }
  std::vector<std::pair<Vec3d, Mat3d>> same(12, {Vec3d(0.5, 0.5, 0.5), Mat3d::Zero()});
  try {
    project_kernel(same, KernelSpace::SdSC);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateGeometry);
  }
}

TEST(BoundaryRank, SphereCircleAndLine) {
  Sampler s(35, 0);
  for (int c = 0; c < 20; ++c) {
    std::vector<Vec3d> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(s.unit());
    EXPECT_EQ(boundary_rank(PointCloud(pts)), 10);
    EXPECT_EQ(oracle::boundary_rank(pts), 10);
  }
  std::vector<Vec3d> circle;
  for (int i = 0; i < 12; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 12.0;
    circle.emplace_back(std::sin(t), 1.0 - std::cos(t), 0.0);
  }
  EXPECT_LT(boundary_rank(PointCloud(circle)), 10);
  EXPECT_EQ(boundary_rank(PointCloud(circle)), oracle::boundary_rank(circle));
  std::vector<Vec3d> line;
  for (int i = 0; i < 5; ++i) line.push_back(double(i) * Vec3d(1, 2, 3));
  EXPECT_LT(boundary_rank(PointCloud(line)), 10);
  EXPECT_EQ(boundary_rank(PointCloud(line)), oracle::boundary_rank(line));
  EXPECT_THROW(PointCloud({}), Error);
}
