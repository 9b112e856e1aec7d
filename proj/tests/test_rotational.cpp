#include "kqch/diffgeo.hpp"
#include "kqch/rotational.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace kqch;

TEST(Profiles, Admissibility) {
  EXPECT_NO_THROW(require_admissible(profile_sin()));
  EXPECT_NO_THROW(require_admissible(profile_ramp()));
  EXPECT_NO_THROW(require_admissible(profile_const_curvature(1.0)));
  EXPECT_NO_THROW(require_admissible(profile_linear(1.0)));
  RotationalProfile bad = profile_sin(0.35, 3.0);  // t' < 0 past the crest
  EXPECT_THROW(require_admissible(bad), std::domain_error);
}

TEST(RadialChart, MonotoneWithExactInverse) {
  RotationalProfile prof = profile_sin();
  RadialChart chart(prof);
  double prev = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double s = prof.s_min + (prof.s_max - prof.s_min) * i / 20.0;
    const double r = chart.rho(s);
    EXPECT_GT(r, prev);
    prev = r;
    EXPECT_NEAR(chart.s_of_r(r), s, 1e-10);
  }
}

TEST(RotationalMetric, LinearProfileIsFlat) {
  MetricField g = rotational_metric(profile_linear(1.0), 3);
  std::mt19937_64 rng(3);
  const Vec p = 0.5 * (g.domain.r0 + g.domain.r1) * random_direction(rng, 6);
  EXPECT_LT(riemann_coord(g, p).max_abs(), 1e-8);
  const QchCoefficients c = rotational_coefficients(profile_linear(1.0), 1.0);
  EXPECT_NEAR(c.a, 0.0, 1e-14);
  EXPECT_NEAR(c.b, 0.0, 1e-14);
  EXPECT_NEAR(c.c, 0.0, 1e-14);
}

TEST(RotationalMetric, SinProfileMatchesClosedFormCoefficients) {
  RotationalProfile prof = profile_sin();
  MetricField g = rotational_metric(prof, 3);
  DistributionField dist = radial_distribution(g);
  RadialChart chart(prof);
  EXPECT_LT(kahler_residual(g, Vec::Unit(6, 0) * 2.0), 1e-8);

  const double s = M_PI / 3.0;
  const QchCoefficients closed = rotational_coefficients(prof, s);
  EXPECT_NEAR(closed.a, 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(closed.b, 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(closed.c, 5.0 / 3.0, 1e-12);

  std::mt19937_64 rng(6);
  const Vec p = chart.rho(s) * random_direction(rng, 6);
  const QchCoefficients numeric = qch_decompose(riemann(g, dist, p), 3);
  EXPECT_NEAR(numeric.a, closed.a, 1e-4);
  EXPECT_NEAR(numeric.b, closed.b, 1e-4);
  EXPECT_NEAR(numeric.c, closed.c, 1e-4);
}

TEST(RotationalMetric, CoefficientsRejectVanishingSlope) {
  RotationalProfile prof = profile_sin(0.3, 1.5);
  EXPECT_THROW(rotational_coefficients(prof, M_PI / 2.0), std::domain_error);
}

TEST(WarpedCurvature, CoefficientPairs) {
  RotationalProfile lin = profile_linear(1.0);
  const auto [c1_lin, c2_lin] = warped_curvature_coefficients(lin, 1.0);
  EXPECT_EQ(c1_lin, 0.0);
  EXPECT_EQ(c2_lin, 0.0);

  RotationalProfile prof = profile_sin();
  const auto [c1, c2] = warped_curvature_coefficients(prof, M_PI / 4.0);
  EXPECT_NEAR(c1, 1.0, 1e-12);  // the unit-sphere slice
  EXPECT_NEAR(c2, 0.0, 1e-12);
}

TEST(WarpedCurvature, MatchesNumericCurvatureOfInducedMetric) {
  RotationalProfile prof = profile_sin();
  RadialChart chart(prof);
  MetricField bar = rotational_induced_metric(prof, 3);
  std::mt19937_64 rng(10);
  for (int i = 0; i < 10; ++i) {
    const double s = 0.5 + 0.8 * i / 9.0;
    const Vec p = chart.rho(s) * random_direction(rng, 6);
    Tensor4 diff = riemann_coord(bar, p);
    diff -= warped_curvature_tensor(prof, chart, p, 3);
    EXPECT_LT(diff.max_abs(), 1e-4);
  }
}

TEST(NablaJ, ClosedFormAndNegativeControl) {
  RotationalProfile prof = profile_sin();
  const double s = M_PI / 3.0;
  EXPECT_LT(nabla_j_residual(prof, 3, s), 1e-4);
  // A constant complex structure that is not the associated one violates
  // the identity at the scale (t'-1)/t.
  EXPECT_GT(nabla_j_residual_mismatched(prof, 3, s), 0.05);

  RotationalProfile lin = profile_linear(1.0);
  EXPECT_LT(nabla_j_residual(lin, 3, 1.0), 1e-10);
}

TEST(Meridian, ClosedFormValues) {
  // y(1) for unit curvature, frozen from the closed form.
  EXPECT_NEAR(constant_curvature_meridian_y(1.0, 1.0), 0.6724573889749224, 1e-12);
  const auto curve = constant_curvature_meridian(1.0, 100);
  ASSERT_EQ(curve.size(), 100u);
  // Domain clamp: 0 < x < 2/sqrt(a) with a relative margin.
  EXPECT_GT(curve.front().first, 0.0);
  EXPECT_LT(curve.back().first, 2.0);
  // Logarithmic fall toward the right end: y decreases without bound.
  EXPECT_LT(curve.back().second, curve.front().second);
  EXPECT_THROW(constant_curvature_meridian(-1.0, 10), std::domain_error);
}

TEST(Meridian, DomainScalesWithCurvature) {
  const auto curve = constant_curvature_meridian(4.0, 50);
  for (const auto& [x, y] : curve) EXPECT_LT(x, 1.0);  // 2/sqrt(4)
}

TEST(Meridian, SatisfiesTheFlatBEquation) {
  EXPECT_LT(meridian_b_residual(1.0, 100), 1e-6);
  EXPECT_LT(meridian_b_residual(2.5, 100), 1e-6);
}

TEST(FlatBOde, ReproducesTheClosedFormCurve) {
  const double a = 1.0;
  const double x_mid = 1.0;
  RotationalProfile ode = solve_b_zero_ode(a, x_mid, -0.8, 0.8);

  // First integral of the flat-b equation: t' = 1 - a t^2 / 4.
  double worst = 0.0;
  for (double s = -0.75; s <= 0.75; s += 0.05) {
    const double t = ode.t(s);
    worst = std::max(worst, std::fabs(ode.t1(s) - (1.0 - a * t * t / 4.0)));
  }
  EXPECT_LT(worst, 1e-7);

  // Height comparison against the closed form, after matching at s = 0.
  auto axial = [&](double s) {
    return -adaptive_simpson(
        [&](double tau) {
          const double t1 = ode.t1(tau);
          return std::sqrt(std::max(0.0, 1.0 - t1 * t1));
        },
        0.0, s, 1e-12);
  };
  const double y0 = constant_curvature_meridian_y(a, x_mid);
  double worst_y = 0.0;
  for (double s = -0.7; s <= 0.7; s += 0.1) {
    const double x = ode.t(s);
    worst_y = std::max(worst_y,
                       std::fabs(y0 + axial(s) - constant_curvature_meridian_y(a, x)));
  }
  EXPECT_LT(worst_y, 1e-5);
}

TEST(FlatBOde, CoefficientIsConstantAlongSolutions) {
  RotationalProfile ode = solve_b_zero_ode(1.0, 1.0, -0.8, 0.8);
  double worst = 0.0;
  for (double s = -0.75; s <= 0.75; s += 0.05) {
    const QchCoefficients c = rotational_coefficients(ode, s);
    worst = std::max(worst, std::fabs(c.a - 1.0));
    EXPECT_LT(std::fabs(c.b), 1e-6);
    EXPECT_LT(std::fabs(c.c), 1e-6);
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(FlatBOde, UnitSlopeGivesTheFlatSolution) {
  // a = 0 puts t'0 = 1, the stationary case: t stays linear and all
  // curvature coefficients vanish.
  RotationalProfile ode = solve_b_zero_ode(0.0, 1.0, -0.5, 0.5);
  for (double s = -0.45; s <= 0.45; s += 0.15) {
    EXPECT_NEAR(ode.t(s), 1.0 + s, 1e-10);
    EXPECT_NEAR(ode.t1(s), 1.0, 1e-10);
    EXPECT_NEAR(ode.t2(s), 0.0, 1e-10);
  }
}

TEST(FlatBOde, RejectsInadmissibleInitialSlopes) {
  // t'0 <= 0: no admissible orientation exists.
  EXPECT_THROW(solve_b_zero_ode(5.0, 1.0, -0.5, 0.5), std::domain_error);
  // t'0 > 1 is impossible for an arc-length parametrized meridian.
  EXPECT_THROW(solve_b_zero_ode(-1.0, 1.0, -0.5, 0.5), std::domain_error);
}

TEST(FlatBOde, LongSpans) {
  // Forward the slope decays toward zero and stays admissible.
  RotationalProfile ode = solve_b_zero_ode(3.9, 1.0, 0.0, 20.0);
  for (double s = 0.0; s <= 20.0; s += 0.5) {
    EXPECT_GT(ode.t1(s), 0.0);
    EXPECT_LE(ode.t1(s), 1.0 + 1e-12);
    EXPECT_GT(ode.t(s), 0.0);
  }
  // Backward the parallel radius hits the axis in finite arc length; the
  // solver reports the exit point.
  try {
    solve_b_zero_ode(3.9, 1.0, -20.0, 0.0);
    FAIL() << "expected an exit-point error";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("s = "), std::string::npos);
  }
}

TEST(Equivalences, AllFlatnessConditionsMeetWhereSlopeIsOne) {
  // Where the meridian tangent is perpendicular to the axis: the two
  // metrics agree, nabla J vanishes, and both curvatures vanish.
  RotationalProfile prof = profile_tangent_flat(2.0, 0.5);
  MetricField g = rotational_metric(prof, 3);
  MetricField bar = rotational_induced_metric(prof, 3);
  RadialChart chart(prof);
  const double r = chart.rho(0.0);  // t'(0) = 1
  Vec p = Vec::Zero(6);
  p[0] = r * 0.8;
  p[5] = -r * 0.6;
  EXPECT_LT((g.value(p) - bar.value(p)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(nabla_j_residual(prof, 3, 0.0), 1e-10);
  const auto [c1, c2] = warped_curvature_coefficients(prof, 0.0);
  EXPECT_NEAR(c1, 0.0, 1e-12);
  EXPECT_NEAR(c2, 0.0, 1e-12);
  EXPECT_LT(riemann_coord(g, p).max_abs(), 1e-6);
  EXPECT_LT(riemann_coord(bar, p).max_abs(), 1e-6);
}

TEST(Coefficients, HorizontalCurvatureNeverNegative) {
  for (const RotationalProfile& prof :
       {profile_sin(), profile_ramp(), profile_const_curvature(2.0)}) {
    for (int i = 0; i <= 16; ++i) {
      const double s = prof.s_min + (prof.s_max - prof.s_min) * i / 16.0;
      EXPECT_GE(rotational_coefficients(prof, s).a, -1e-14);
    }
  }
}

TEST(Coefficients, VerticalCurvatureMatchesNumericSum) {
  RotationalProfile prof = profile_ramp();
  MetricField g = rotational_metric(prof, 3);
  DistributionField dist = radial_distribution(g);
  RadialChart chart(prof);
  std::mt19937_64 rng(77);
  for (double s : {0.8, 1.2, 1.6}) {
    const Vec p = chart.rho(s) * random_direction(rng, 6);
    const Tensor4 R = riemann(g, dist, p);
    const QchCoefficients closed = rotational_coefficients(prof, s);
    EXPECT_NEAR(R(0, 1, 1, 0), closed.a + closed.b + closed.c, 1e-4);
  }
}
