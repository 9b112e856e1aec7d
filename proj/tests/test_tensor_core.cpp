#include "kqch/invariants.hpp"
#include "kqch/linalg.hpp"
#include "kqch/tangent_space.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace kqch;

namespace {

// Independent oracle: the scalar curvatures of a*Pi + b*Phi + c*Psi from
// the geometric relations (vertical = a+b+c, mixed gap = (n-1)(2a+b)/4,
// horizontal trace = n(n-1)a).
struct ScalarsOracle {
  double tau, sigma, kappa;
};
ScalarsOracle forward_scalars(double a, double b, double c, int n) {
  ScalarsOracle s;
  s.kappa = a + b + c;
  s.sigma = s.kappa + (n - 1) * (2.0 * a + b) / 4.0;
  s.tau = n * (n - 1) * a + 2.0 * s.sigma + 2.0 * (s.sigma - s.kappa);
  return s;
}

AdaptedFrame euclidean_frame(int n) {
  TangentSpace space = make_tangent_space(n, Mat::Identity(2 * n, 2 * n));
  return adapted_frame(space, Vec::Unit(2 * n, 0));
}

}  // namespace

TEST(TangentSpace, ValidatesStructure) {
  EXPECT_NO_THROW(make_tangent_space(3, Mat::Identity(6, 6)));
  Mat bad = Mat::Identity(6, 6);
  bad(0, 0) = -1.0;  // not positive definite
  EXPECT_THROW(make_tangent_space(3, bad), std::invalid_argument);
  Mat skew = Mat::Identity(6, 6);
  skew(0, 2) = 0.3;  // breaks J-compatibility and symmetry
  EXPECT_THROW(make_tangent_space(3, skew), std::invalid_argument);
}

TEST(AdaptedFrame, EuclideanIdentityCase) {
  AdaptedFrame f = euclidean_frame(3);
  EXPECT_LT((f.vectors - Mat::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(f.residual(), 1e-14);
}

TEST(AdaptedFrame, ScaledMetric) {
  TangentSpace space = make_tangent_space(2, 2.0 * Mat::Identity(4, 4));
  AdaptedFrame f = adapted_frame(space, Vec::Unit(4, 0));
  EXPECT_NEAR(f.vectors.col(0).norm(), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_LT(f.residual(), 1e-12);
}

TEST(AdaptedFrame, RandomSpdMetricSatisfiesInvariants) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    TangentSpace space = make_tangent_space(n, random_hermitian_spd(rng, n));
    const Vec xi = random_direction(rng, 2 * n);
    AdaptedFrame f = adapted_frame(space, xi);
    EXPECT_LT(f.residual(), 1e-12);
  }
}

TEST(AdaptedFrame, RejectsDegenerateInput) {
  TangentSpace space = make_tangent_space(3, Mat::Identity(6, 6));
  EXPECT_THROW(adapted_frame(space, Vec::Zero(6)), std::invalid_argument);
}

TEST(SymmetryResidual, InvariantTensorIsExactlyKahler) {
  AdaptedFrame f = euclidean_frame(3);
  for (auto kind : {InvariantKind::Pi, InvariantKind::Phi, InvariantKind::Psi}) {
    Tensor4 T = invariant_tensor(kind, f);
    EXPECT_LT(kahler_symmetry_residual(T), 1e-12);
  }
}

TEST(SymmetryResidual, DetectsBrokenSymmetry) {
  AdaptedFrame f = euclidean_frame(3);
  Tensor4 T = invariant_tensor(InvariantKind::Pi, f);
  T(0, 1, 2, 3) += 1.0;
  EXPECT_GE(kahler_symmetry_residual(T), 0.5);
}

TEST(CurvatureScalars, ZeroTensor) {
  const CurvatureScalars s = curvature_scalars(Tensor4(6), 3);
  EXPECT_EQ(s.tau, 0.0);
  EXPECT_EQ(s.sigma, 0.0);
  EXPECT_EQ(s.kappa, 0.0);
}

TEST(CurvatureScalars, MatchesForwardOracle) {
  const StructureData os = orthonormal_structure(3);
  const Tensor4 R = qch_tensor(2.0, 3.0, 5.0, os);
  const CurvatureScalars s = curvature_scalars(R, 3);
  EXPECT_NEAR(s.kappa, 10.0, 1e-12);
  EXPECT_NEAR(s.sigma, 13.5, 1e-12);
  EXPECT_NEAR(s.tau, 46.0, 1e-12);
  const ScalarsOracle o = forward_scalars(2.0, 3.0, 5.0, 3);
  EXPECT_NEAR(s.tau, o.tau, 1e-12);
  EXPECT_NEAR(s.sigma, o.sigma, 1e-12);
}

TEST(CurvatureScalars, PurePiTensor) {
  const StructureData os = orthonormal_structure(3);
  const Tensor4 R = qch_tensor(4.0, 0.0, 0.0, os);
  const CurvatureScalars s = curvature_scalars(R, 3);
  EXPECT_NEAR(s.kappa, 4.0, 1e-12);
  EXPECT_NEAR(s.sigma, 8.0, 1e-12);
  EXPECT_NEAR(s.tau, 48.0, 1e-12);
}

TEST(CurvatureScalars, RelationsCloseForRandomCoefficients) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const double a = coeff(rng), b = coeff(rng), c = coeff(rng);
    const Tensor4 R = qch_tensor(a, b, c, orthonormal_structure(n));
    const CurvatureScalars s = curvature_scalars(R, n);
    const ScalarsOracle o = forward_scalars(a, b, c, n);
    EXPECT_NEAR(s.tau, o.tau, 1e-10);
    EXPECT_NEAR(s.sigma, o.sigma, 1e-10);
    EXPECT_NEAR(s.kappa, o.kappa, 1e-10);
  }
}

TEST(AnglePhi, StructuralDirections) {
  AdaptedFrame f = euclidean_frame(3);
  EXPECT_NEAR(angle_phi(f.vector(0), f), 0.0, 1e-12);
  EXPECT_NEAR(angle_phi(f.vector(2), f), M_PI / 2.0, 1e-12);
}

TEST(AnglePhi, DiagonalDirectionGivesQuarterTurn) {
  AdaptedFrame f = euclidean_frame(3);
  const Vec x = (f.vector(2) + f.vector(0)) / std::sqrt(2.0);
  EXPECT_NEAR(angle_phi(x, f), M_PI / 4.0, 1e-12);
}

TEST(AnglePhi, RejectsNonUnitVectors) {
  AdaptedFrame f = euclidean_frame(3);
  EXPECT_THROW(angle_phi(2.0 * f.vector(0), f), std::invalid_argument);
}

TEST(AnglePhi, InvariantUnderStructuralRotations) {
  std::mt19937_64 rng(19);
  TangentSpace space = make_tangent_space(3, Mat::Identity(6, 6));
  const Vec xi = random_direction(rng, 6);
  AdaptedFrame base = adapted_frame(space, xi);
  const Vec x = random_direction(rng, 6);
  const double e0 = base.eta.dot(x), t0 = base.eta_tilde.dot(x);
  const double reference = e0 * e0 + t0 * t0;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (int i = 0; i < 10; ++i) {
    const double phi = angle(rng);
    const Vec rotated = std::cos(phi) * base.vector(0) + std::sin(phi) * base.vector(1);
    AdaptedFrame f = adapted_frame(space, rotated);
    const double e = f.eta.dot(x), t = f.eta_tilde.dot(x);
    EXPECT_NEAR(e * e + t * t, reference, 1e-12);
  }
}
