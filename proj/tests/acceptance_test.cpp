// Acceptance criteria for the whole artifact.  Each test is one criterion,
// run at its stated tolerance; together they exercise every family,
// transformation and closed form the library provides (n = 3 throughout).

#include "kqch/diffgeo.hpp"
#include "kqch/families.hpp"
#include "kqch/invariants.hpp"
#include "kqch/rotational.hpp"
#include "kqch/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace kqch;

namespace {

constexpr int kN = 3;

struct NamedFamily {
  std::string name;
  MetricField field;
};

std::vector<NamedFamily> all_families() {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> c(-0.05, 0.05);
  return {
      {"flat", flat_metric(kN)},
      {"potential-log1p", potential_metric(radial_log1p(), kN)},
      {"potential-quartic", potential_metric(radial_poly({0.0, 1.0, 0.25}), kN)},
      {"normal-form", biconformally_flat_normal_form(
                          radial_poly({c(rng), c(rng), 0.02 * c(rng)}), kN)},
      {"rotational-sin", rotational_metric(profile_sin(), kN)},
  };
}

RadialScalar exponent_half_log1p() { return radial_scale(radial_log1p(), 0.5); }

RadialScalar exponent_half_log1p_half() {
  RadialScalar v;
  v.value = [](double rho) { return 0.5 * std::log1p(0.5 * rho); };
  v.d1 = [](double rho) { return 0.25 / (1.0 + 0.5 * rho); };
  v.d2 = [](double rho) { return -0.125 / ((1.0 + 0.5 * rho) * (1.0 + 0.5 * rho)); };
  return v;
}

}  // namespace

TEST(Acceptance, C01_SymmetrySuite) {
  // Invariant tensors are Kahler to machine precision.
  const StructureData os = orthonormal_structure(kN);
  for (auto kind : {InvariantKind::Pi, InvariantKind::Phi, InvariantKind::Psi})
    EXPECT_LT(kahler_symmetry_residual(invariant_tensor(kind, os)), 1e-12);

  // Numeric curvature of every family: residual < 1e-6 * |T| at 20 seeded
  // points per family.
  for (const NamedFamily& fam : all_families()) {
    DistributionField dist = radial_distribution(fam.field);
    const std::vector<Vec> pts = sample_points(fam.field.domain, 2 * kN, 20, 101);
    const CheckReport rep = check_symmetries(fam.field, dist, pts, 1e-6);
    EXPECT_TRUE(rep.pass) << fam.name;
  }
}

TEST(Acceptance, C02_DecompositionRoundTrip) {
  std::mt19937_64 rng(31415);
  std::uniform_real_distribution<double> coeff(-5.0, 5.0);
  const StructureData os = orthonormal_structure(kN);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = coeff(rng), b = coeff(rng), c = coeff(rng);
    const QchCoefficients q = qch_decompose(qch_tensor(a, b, c, os), kN);
    ASSERT_NEAR(q.a, a, 1e-12);
    ASSERT_NEAR(q.b, b, 1e-12);
    ASSERT_NEAR(q.c, c, 1e-12);
    ASSERT_LT(q.residual, 1e-12);

    // Scalar relations close up: forward through the curvature scalars,
    // back through the coefficient formulas.
    const CurvatureScalars s = curvature_scalars(qch_tensor(a, b, c, os), kN);
    ASSERT_NEAR(s.kappa, a + b + c, 1e-10);
    ASSERT_NEAR(s.sigma - s.kappa, (kN - 1) * (2.0 * a + b) / 4.0, 1e-10);
    ASSERT_NEAR(s.tau - 4.0 * s.sigma + 2.0 * s.kappa, kN * (kN - 1) * a, 1e-10);
    const QchCoefficients back = coefficients_from_scalars(s.tau, s.sigma, s.kappa, kN);
    ASSERT_NEAR(back.a, a, 1e-10);
    ASSERT_NEAR(back.b, b, 1e-10);
    ASSERT_NEAR(back.c, c, 1e-10);
  }
}

TEST(Acceptance, C03_HolomorphicProfileForward) {
  MetricField rot = rotational_metric(profile_sin(), kN);
  DistributionField dist = radial_distribution(rot);
  const std::vector<Vec> pts = sample_points(rot.domain, 2 * kN, 10, 103);
  std::mt19937_64 rng(104);
  for (const Vec& p : pts) {
    const AdaptedFrame frame = frame_at(rot, dist, p);
    const Tensor4 R = riemann(rot, p, frame);
    const QchCoefficients q = qch_decompose(R, kN);
    const double scale = std::max({std::fabs(q.a), std::fabs(q.b), std::fabs(q.c), 1e-6});
    for (int trial = 0; trial < 50; ++trial) {
      // Unit vector with respect to the frame metric.
      Vec comps = random_direction(rng, 2 * kN);
      Vec x = frame.vectors * comps;
      const double phi = angle_phi(x, frame);
      const Vec jx = rot.J * x;
      const double lhs = riemann_coord(rot, p).contract(x, jx, jx, x);
      ASSERT_NEAR(lhs, hol_profile(q, phi), 1e-4 * scale);
    }
  }
}

TEST(Acceptance, C04_RotationalCrossValidation) {
  // Closed-form spot value at s = pi/3 for the sine profile.
  const QchCoefficients ref = rotational_coefficients(profile_sin(), M_PI / 3.0);
  EXPECT_NEAR(ref.a, 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(ref.b, 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(ref.c, 5.0 / 3.0, 1e-12);

  std::mt19937_64 rng(105);
  const std::vector<RotationalProfile> profiles = {profile_sin(), profile_ramp(),
                                                   profile_const_curvature(1.0)};
  for (const RotationalProfile& prof : profiles) {
    MetricField g = rotational_metric(prof, kN);
    DistributionField dist = radial_distribution(g);
    RadialChart chart(prof);
    MetricField bar = rotational_induced_metric(prof, kN);
    for (int i = 0; i < 10; ++i) {
      const double s = prof.s_min + (prof.s_max - prof.s_min) * (i + 1.0) / 12.0;
      const Vec p = chart.rho(s) * random_direction(rng, 2 * kN);
      const QchCoefficients numeric = qch_decompose(riemann(g, dist, p), kN);
      const QchCoefficients closed = rotational_coefficients(prof, s);
      ASSERT_NEAR(numeric.a, closed.a, 1e-4);
      ASSERT_NEAR(numeric.b, closed.b, 1e-4);
      ASSERT_NEAR(numeric.c, closed.c, 1e-4);

      Tensor4 diff = riemann_coord(bar, p);
      diff -= warped_curvature_tensor(prof, chart, p, kN);
      ASSERT_LT(diff.max_abs(), 1e-4);
    }
  }
}

TEST(Acceptance, C05_BiconformalInvariance) {
  MetricField flat = flat_metric(kN);
  MetricField fs = potential_metric(radial_log1p(), kN);
  const std::vector<std::pair<std::string, RadialScalar>> exponents = {
      {"half-log1p", exponent_half_log1p()},
      {"half-log1p-half", exponent_half_log1p_half()},
      {"linear", radial_poly({0.0, 0.04})},
  };
  for (MetricField* src : {&flat, &fs}) {
    DistributionField dist = radial_distribution(*src);
    auto k_at = [&](double r) {
      Vec p = Vec::Zero(2 * kN);
      p[0] = r;
      return nabla_eta(*src, dist, p).k;
    };
    for (const auto& [name, v] : exponents) {
      const BiconformalPair pair =
          make_biconformal_pair(v, k_at, 0.4, 3.6, radial_arc_weight(*src), 1e-9);
      MetricField image = biconformal_apply(*src, dist, pair);
      const std::vector<Vec> pts = sample_points(image.domain, 2 * kN, 5, 106);
      const QcInvarianceReport rep = check_qc_invariance(*src, image, dist, pair, pts);
      for (double r : rep.qc.residuals) ASSERT_LT(r, 1e-4) << src->name << " " << name;
      for (double r : rep.scalar.residuals) ASSERT_LT(r, 1e-5) << src->name << " " << name;
    }
  }

  // Composition law on the canonical example.
  DistributionField dist = radial_distribution(flat);
  const BiconformalPair p1 = make_biconformal_pair(
      exponent_half_log1p(), [](double r) { return 2.0 / r; }, 0.25, 4.5);
  MetricField g1 = biconformal_apply(flat, dist, p1);
  const BiconformalPair p2 = second_stage_pair(p1, exponent_half_log1p_half());
  MetricField g2 = biconformal_apply(g1, radial_distribution(g1), p2);
  MetricField gc = biconformal_apply(flat, dist, composed_pair(p1, p2));
  std::mt19937_64 rng(107);
  for (int i = 0; i < 6; ++i) {
    const Vec p = (0.6 + 0.5 * i) * random_direction(rng, 2 * kN);
    const Mat diff = g2.value(p) - gc.value(p);
    ASSERT_LT(diff.cwiseAbs().maxCoeff() / gc.value(p).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Acceptance, C06_Flattening) {
  MetricField fs = potential_metric(radial_log1p(), kN);
  const FlattenResult f1 = flatten(fs, radial_distribution(fs), 0.6, 3.2);
  for (double r : f1.report.residuals) ASSERT_LT(r, 1e-4);

  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> c(-0.05, 0.05);
  MetricField nf = biconformally_flat_normal_form(
      radial_poly({c(rng), c(rng), 0.02 * c(rng)}), kN);
  const FlattenResult f2 = flatten(nf, radial_distribution(nf), 0.7, 3.0);
  for (double r : f2.report.residuals) ASSERT_LT(r, 1e-4);
}

TEST(Acceptance, C07_PotentialEqualsNormalForm) {
  MetricField pot = potential_metric(radial_log1p(), kN);
  // e^{-2u} = 2 f', e^{-2v} = 1 + rho f''/f' for the log potential.
  MetricField nf = biconformally_flat_normal_form(exponent_half_log1p(), kN, 0.2, 5.0);
  Vec ref = Vec::Zero(2 * kN);
  ref[0] = 1.0;
  const double scale = pot.value(ref)(2, 2) / nf.value(ref)(2, 2);
  std::mt19937_64 rng(109);
  for (int i = 0; i < 10; ++i) {
    const Vec p = (0.4 + 0.4 * i) * random_direction(rng, 2 * kN);
    const Mat a = pot.value(p);
    const Mat b = scale * nf.value(p);
    ASSERT_LT((a - b).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Acceptance, C08_ConstantCurvatureMeridian) {
  EXPECT_LT(meridian_b_residual(1.0, 100), 1e-6);

  // Mid-curve initial data reproduce the closed form.
  const double a = 1.0, x_mid = 1.0;
  RotationalProfile ode = solve_b_zero_ode(a, x_mid, -0.8, 0.8);
  auto axial = [&](double s) {
    return -adaptive_simpson(
        [&](double tau) {
          const double t1 = ode.t1(tau);
          return std::sqrt(std::max(0.0, 1.0 - t1 * t1));
        },
        0.0, s, 1e-12);
  };
  const double y0 = constant_curvature_meridian_y(a, x_mid);
  double worst_y = 0.0, worst_a = 0.0;
  for (double s = -0.75; s <= 0.75; s += 0.05) {
    worst_y = std::max(worst_y, std::fabs(y0 + axial(s)
                                          - constant_curvature_meridian_y(a, ode.t(s))));
    worst_a = std::max(worst_a, std::fabs(rotational_coefficients(ode, s).a - a));
  }
  EXPECT_LT(worst_y, 1e-5);
  EXPECT_LT(worst_a, 1e-6);
}

TEST(Acceptance, C09_Integrability) {
  MetricField rot = rotational_metric(profile_sin(), kN);
  DistributionField dist = radial_distribution(rot);
  const std::vector<Vec> pts = sample_points(rot.domain, 2 * kN, 5, 110);
  const CheckReport rep = check_integrability(rot, dist, pts);
  EXPECT_TRUE(rep.pass);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double xa = rep.scalars.at("xi_a")[i], ma = rep.scalars.at("model_a")[i];
    const double xb = rep.scalars.at("xi_b")[i], mb = rep.scalars.at("model_b")[i];
    ASSERT_LT(std::fabs(xa - ma), 1e-3 * std::max(1.0, std::fabs(ma)));
    ASSERT_LT(std::fabs(xb - mb), 1e-3 * std::max(1.0, std::fabs(mb)));
  }
}

TEST(Acceptance, C10_B0StructureSuite) {
  MetricField flat = flat_metric(kN);
  DistributionField dist = radial_distribution(flat);

  // k = 2/r to 1e-8, theta = theta* = p = 0 to 1e-6 at fixed radii.
  for (double r : {0.5, 1.0, 2.0}) {
    Vec p = Vec::Zero(2 * kN);
    p[0] = r * 0.36;
    p[3] = -r * std::sqrt(1.0 - 0.36 * 0.36);
    const NablaEta ne = nabla_eta(flat, dist, p);
    ASSERT_NEAR(ne.k, 2.0 / r, 1e-8);
    ASSERT_LT(std::fabs(ne.p), 1e-6);
    ASSERT_LT(ne.theta.cwiseAbs().maxCoeff(), 1e-6);
    ASSERT_LT(ne.theta_star.cwiseAbs().maxCoeff(), 1e-6);
  }

  // Closed form of nabla eta, the k-transport relation, the p* relation and
  // the scalar-curvature formulas on the flat, potential and normal-form
  // families, all below 1e-4.
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> c(-0.05, 0.05);
  std::vector<NamedFamily> families = {
      {"flat", flat},
      {"potential-log1p", potential_metric(radial_log1p(), kN)},
      {"normal-form", biconformally_flat_normal_form(
                          radial_poly({c(rng), c(rng), 0.02 * c(rng)}), kN)},
  };
  Tolerances tol;
  tol.b0_structure = 1e-4;
  for (const NamedFamily& fam : families) {
    DistributionField fd = radial_distribution(fam.field);
    const std::vector<Vec> pts = sample_points(fam.field.domain, 2 * kN, 6, 112);
    const CheckReport rep = check_b0_distribution(fam.field, fd, pts, tol);
    EXPECT_TRUE(rep.pass) << fam.name;
    for (double r : rep.scalars.at("res_closed_form")) ASSERT_LT(r, 1e-4) << fam.name;
    for (double r : rep.scalars.at("res_k_transport")) ASSERT_LT(r, 1e-4) << fam.name;
    for (double r : rep.scalars.at("res_scalar_formulas")) ASSERT_LT(r, 1e-4) << fam.name;
  }
}
