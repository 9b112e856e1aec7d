#include "kqch/verify.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kqch {

namespace {

// Kahler form on adapted-frame indices: Omega(v_a, v_b).
double frame_omega(int a, int b) {
  if (b == a + 1 && a % 2 == 0) return 1.0;
  if (a == b + 1 && b % 2 == 0) return -1.0;
  return 0.0;
}

// Index and sign of J v_a in the adapted frame.
std::pair<int, double> frame_j(int a) {
  return (a % 2 == 0) ? std::pair{a + 1, 1.0} : std::pair{a - 1, -1.0};
}

DistributionField principal_distribution(const MetricField& field,
                                         const DistributionField& base) {
  DistributionField d;
  d.xi = [field, base](const Vec& q) { return principal_frame(field, base, q).vector(0); };
  return d;
}

double relative(double res, double scale) { return res / std::max(scale, 1e-12); }

}  // namespace

std::vector<Vec> sample_points(const Domain& domain, int dim, int count, std::uint64_t seed,
                               double margin_frac) {
  std::mt19937_64 rng(seed);
  double lo = domain.r0 + margin_frac * (domain.r1 - domain.r0);
  double hi = domain.r1 - 2.0 * margin_frac * (domain.r1 - domain.r0);
  lo = std::max(lo, 0.3 * std::min(1.0, domain.r1));
  if (!(hi > lo)) throw std::invalid_argument("sample_points: empty sampling annulus");
  std::uniform_real_distribution<double> radius(lo, hi);
  std::vector<Vec> pts(count);
  for (int i = 0; i < count; ++i) pts[i] = radius(rng) * random_direction(rng, dim);
  return pts;
}

CheckReport check_symmetries(const MetricField& field, const DistributionField& dist,
                             const std::vector<Vec>& points, double tolerance, Exec exec) {
  CheckReport rep;
  rep.name = "kahler-symmetries";
  rep.statement = "pair antisymmetries, first Bianchi identity, J-invariance of R";
  rep.points = points;
  rep.tolerance = tolerance;
  rep.residuals = map_indexed<double>(points.size(), [&](std::size_t i) {
    const Tensor4 R = riemann(field, dist, points[i]);
    return relative(kahler_symmetry_residual(R), std::max(R.max_abs(), 1e-8));
  }, exec);
  rep.finish();
  return rep;
}

CheckReport check_qch(const MetricField& field, const DistributionField& dist,
                      const std::vector<Vec>& points, double tolerance, Exec exec) {
  CheckReport rep;
  rep.name = "qch-decomposition";
  rep.statement = "R = a pi + b Phi + c Psi with pointwise coefficients";
  rep.points = points;
  rep.tolerance = tolerance;
  struct Row { double res, a, b, c; };
  auto rows = map_indexed<Row>(points.size(), [&](std::size_t i) {
    const Tensor4 R = riemann(field, dist, points[i]);
    const QchCoefficients q = qch_decompose(R, field.n);
    return Row{q.residual / std::max(R.max_abs(), 1.0), q.a, q.b, q.c};
  }, exec);
  for (const Row& r : rows) {
    rep.residuals.push_back(r.res);
    rep.scalars["a"].push_back(r.a);
    rep.scalars["b"].push_back(r.b);
    rep.scalars["c"].push_back(r.c);
  }
  rep.finish();
  return rep;
}

CheckReport check_ricci_identity(const MetricField& field, const DistributionField& dist,
                                 const std::vector<Vec>& points, double tolerance, Exec exec) {
  CheckReport rep;
  rep.name = "ricci-identity";
  rep.statement = "rho determined by g and the structural forms through tau and sigma";
  rep.points = points;
  rep.tolerance = tolerance;
  rep.residuals = map_indexed<double>(points.size(), [&](std::size_t i) {
    const Tensor4 R = riemann(field, dist, points[i]);
    const int d = field.dim();
    double rho_scale = 1e-12;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double acc = 0.0;
        for (int a = 0; a < d; ++a) acc += R(a, j, k, a);
        rho_scale = std::max(rho_scale, std::fabs(acc));
      }
    return relative(ricci_identity_residual(R, field.n), rho_scale);
  }, exec);
  rep.finish();
  return rep;
}

CheckReport check_second_bianchi(const MetricField& field, const std::vector<Vec>& points,
                                 double tolerance, Exec exec) {
  CheckReport rep;
  rep.name = "second-bianchi";
  rep.statement = "cyclic sum of nabla R vanishes";
  rep.points = points;
  rep.tolerance = tolerance;
  rep.residuals = map_indexed<double>(points.size(), [&](std::size_t i) {
    const Bianchi2 b = second_bianchi_residual(field, points[i]);
    return relative(b.residual, std::max(b.scale, 1e-10));
  }, exec);
  rep.finish();
  return rep;
}

namespace {

struct BRow {
  double res = 0.0;
  double k = 0.0;
  bool k_nonzero = false;
};

BRow b_conditions_at(const MetricField& field, const DistributionField& dist, const Vec& p,
                     const Tolerances& tol) {
  const NablaEta ne = nabla_eta(field, dist, p);
  const Involutivity inv = involutivity(field, dist, p, tol.b_structure);
  const int d = field.dim();
  double prop = 0.0;
  for (int a = 2; a < d; ++a)
    for (int b = 2; b < d; ++b) {
      const double det = ne.nabla_eta_tilde(a, b) - ne.nabla_eta_tilde(b, a);
      prop = std::max(prop, std::fabs(det - ne.k * frame_omega(a, b)));
    }
  BRow row;
  row.k = ne.k;
  row.k_nonzero = std::fabs(ne.k) > 1e-6;
  row.res = std::max({inv.res_Delta, inv.res_Dperp, prop});
  return row;
}

}  // namespace

CheckReport check_b_distribution(const MetricField& field, const DistributionField& dist,
                                 const std::vector<Vec>& points, const Tolerances& tol,
                                 Exec exec) {
  CheckReport rep;
  rep.name = "b-distribution";
  rep.statement =
      "ker(eta) and the structural plane involutive; d eta~ = k Omega on D with k != 0";
  rep.points = points;
  rep.tolerance = tol.b_structure;
  auto rows = map_indexed<BRow>(points.size(), [&](std::size_t i) {
    return b_conditions_at(field, dist, points[i], tol);
  }, exec);
  for (const BRow& r : rows) {
    rep.residuals.push_back(r.k_nonzero ? r.res : 1e9);
    rep.scalars["k"].push_back(r.k);
  }
  rep.finish();
  return rep;
}

CheckReport check_b0_distribution(const MetricField& field, const DistributionField& dist,
                                  const std::vector<Vec>& points, const Tolerances& tol,
                                  Exec exec) {
  for (const Vec& p : points) {
    if (kahler_residual(field, p) > 1e-6)
      throw std::invalid_argument("check_b0_distribution: field is not Kahler");
  }
  CheckReport rep;
  rep.name = "b0-distribution";
  rep.statement =
      "B-conditions, symmetric invariant D-block of nabla eta, theta = 0, and their "
      "consequences for k, p, p* and the curvature scalars";
  rep.points = points;
  rep.tolerance = tol.b0_structure;

  struct Row {
    double res;
    double k, p, p_star;
    double res_b, res_form, res_k_transport, res_scalars;
  };
  const int n = field.n;
  const int d = field.dim();
  auto rows = map_indexed<Row>(points.size(), [&](std::size_t i) {
    const Vec& p = points[i];
    const BRow bb = b_conditions_at(field, dist, p, tol);
    const NablaEta ne = nabla_eta(field, dist, p);

    // Symmetric J-invariant D-block and theta = theta* = 0.
    double res_cond = 0.0;
    for (int a = 2; a < d; ++a) {
      res_cond = std::max(res_cond, std::fabs(ne.theta[a]));
      res_cond = std::max(res_cond, std::fabs(ne.theta_star[a]));
      for (int b = 2; b < d; ++b) {
        const auto [ja, sa] = frame_j(a);
        const auto [jb, sb] = frame_j(b);
        res_cond = std::max(res_cond,
                            std::fabs(ne.nabla_eta(a, b) - sa * sb * ne.nabla_eta(ja, jb)));
      }
    }

    // Closed form of nabla eta in the adapted frame.
    double res_form = std::fabs(ne.p);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double expected = 0.5 * ne.k * ((a == b ? 1.0 : 0.0)
                                        - (a == 0 && b == 0 ? 1.0 : 0.0)
                                        - (a == 1 && b == 1 ? 1.0 : 0.0));
        if (a == 1 && b == 1) expected -= ne.p_star;
        res_form = std::max(res_form, std::fabs(ne.nabla_eta(a, b) - expected));
      }

    // Transport of k: flat along D and J xi, xi(k) = -k(k + p*); and the
    // p* relation that follows from it.
    const AdaptedFrame frame = frame_at(field, dist, p);
    auto k_at = [&](const Vec& q) { return nabla_eta(field, dist, q).k; };
    const double h = 2e-3 * std::max(1.0, p.norm());
    const double xi_k = directional_derivative(k_at, p, frame.vector(0), h);
    const double jxi_k = directional_derivative(k_at, p, frame.vector(1), h);
    const double d_k = directional_derivative(k_at, p, frame.vector(2), h);
    double res_k = std::max(std::fabs(jxi_k), std::fabs(d_k));
    res_k = std::max(res_k, std::fabs(xi_k + ne.k * (ne.k + ne.p_star)));
    if (std::fabs(ne.k) > 1e-8)
      res_k = std::max(res_k, std::fabs(ne.p_star + (xi_k + ne.k * ne.k) / ne.k));

    // Scalar-curvature formulas in terms of F = k^2 + 2 k p*.
    const Tensor4 R = riemann(field, p, frame);
    const CurvatureScalars cs = curvature_scalars(R, n);
    auto F_at = [&](const Vec& q) {
      const NablaEta v = nabla_eta(field, dist, q);
      return v.k * v.k + 2.0 * v.k * v.p_star;
    };
    const double F = F_at(p);
    const double xi_F = directional_derivative(F_at, p, frame.vector(0), h);
    double res_sc = 0.0;
    if (std::fabs(ne.k) > 1e-8) {
      res_sc = std::max(res_sc,
                        std::fabs(cs.sigma - (xi_F / (2.0 * ne.k) + 0.5 * (n + 1) * F)));
      res_sc = std::max(res_sc, std::fabs(cs.kappa - (xi_F / (2.0 * ne.k) + F)));
    }
    res_sc = std::max(res_sc, std::fabs((cs.sigma - cs.kappa) / (2.0 * (n - 1)) - 0.25 * F));

    // R(X,Y)xi determined by the mixed and vertical curvatures.
    const StructureData os = orthonormal_structure(n);
    const Tensor4 Phi = invariant_tensor(InvariantKind::Phi, os);
    const Tensor4 Psi = invariant_tensor(InvariantKind::Psi, os);
    const double mix = 4.0 * (cs.sigma - cs.kappa) / (n - 1);
    double res_rxy = 0.0;
    for (int i2 = 0; i2 < d; ++i2)
      for (int j2 = 0; j2 < d; ++j2)
        for (int l2 = 0; l2 < d; ++l2) {
          const double model = mix * (Phi(i2, j2, 0, l2) - Psi(i2, j2, 0, l2))
                               + cs.kappa * Psi(i2, j2, 0, l2);
          res_rxy = std::max(res_rxy, std::fabs(R(i2, j2, 0, l2) - model));
        }
    res_sc = std::max(res_sc, res_rxy);

    Row row;
    row.k = ne.k;
    row.p = ne.p;
    row.p_star = ne.p_star;
    row.res_b = bb.k_nonzero ? bb.res : 1e9;
    row.res_form = res_form;
    row.res_k_transport = res_k;
    row.res_scalars = res_sc;
    // Structural conditions carry a tighter tolerance than the stacked
    // finite-difference consequences; normalize both to the report scale.
    const double scale = tol.b0_structure;
    row.res = scale * std::max({(row.res_b + res_cond) / tol.b_structure,
                                row.res_form / scale, row.res_k_transport / scale,
                                row.res_scalars / scale});
    return row;
  }, exec);

  for (const Row& r : rows) {
    rep.residuals.push_back(r.res);
    rep.scalars["k"].push_back(r.k);
    rep.scalars["p"].push_back(r.p);
    rep.scalars["p_star"].push_back(r.p_star);
    rep.scalars["res_structure"].push_back(r.res_b);
    rep.scalars["res_closed_form"].push_back(r.res_form);
    rep.scalars["res_k_transport"].push_back(r.res_k_transport);
    rep.scalars["res_scalar_formulas"].push_back(r.res_scalars);
  }
  rep.finish();
  return rep;
}

CheckReport check_integrability(const MetricField& field, const DistributionField& dist,
                                const std::vector<Vec>& points, const Tolerances& tol,
                                Exec exec) {
  CheckReport rep;
  rep.name = "integrability";
  rep.statement =
      "in a principal frame: da = b div0(xi)/(2(n-1)) eta, db = (b+4c) div0(xi)/(n-1) eta, "
      "dc along eta, theta = theta* = 0";
  rep.points = points;
  rep.tolerance = tol.integrability;
  const int n = field.n;
  const int d = field.dim();
  if (n < 3) rep.note = "outside the stated dimension range; informational";

  const DistributionField pdist = principal_distribution(field, dist);

  struct Row { double res, xi_a, model_a, xi_b, model_b; };
  auto rows = map_indexed<Row>(points.size(), [&](std::size_t i) {
    const Vec& p = points[i];
    const AdaptedFrame pframe = principal_frame(field, dist, p);
    const NablaEta ne = nabla_eta(field, pdist, p);

    auto coeff_at = [&](const Vec& q) { return qch_decompose(riemann(field, dist, q), n); };
    const QchCoefficients q0 = coeff_at(p);
    const double h = 1e-2 * std::max(1.0, p.norm());

    Vec da(d), db(d), dc(d);
    for (int a = 0; a < d; ++a) {
      const Vec dir = pframe.vector(a);
      da[a] = directional_derivative([&](const Vec& q) { return coeff_at(q).a; }, p, dir, h);
      db[a] = directional_derivative([&](const Vec& q) { return coeff_at(q).b; }, p, dir, h);
      dc[a] = directional_derivative([&](const Vec& q) { return coeff_at(q).c; }, p, dir, h);
    }

    const double model_a = q0.b * ne.div0_xi / (2.0 * (n - 1));
    const double model_b = (q0.b + 4.0 * q0.c) * ne.div0_xi / (n - 1);
    const double scale = std::max({1.0, std::fabs(da[0]), std::fabs(db[0]), std::fabs(dc[0])});

    double res = std::max(std::fabs(da[0] - model_a), std::fabs(db[0] - model_b)) / scale;
    // Derivatives along J xi and along D must vanish; so must theta and
    // theta* of the principal frame.
    for (int a = 1; a < d; ++a) {
      res = std::max(res, std::fabs(da[a]) / scale);
      res = std::max(res, std::fabs(db[a]) / scale);
      res = std::max(res, std::fabs(dc[a]) / scale);
    }
    res = std::max(res, std::fabs(ne.div0_Jxi) / std::max(1.0, std::fabs(ne.div0_xi)));
    for (int a = 2; a < d; ++a)
      res = std::max(res, std::max(std::fabs(ne.theta[a]), std::fabs(ne.theta_star[a])));

    return Row{res, da[0], model_a, db[0], model_b};
  }, exec);

  for (const Row& r : rows) {
    rep.residuals.push_back(r.res);
    rep.scalars["xi_a"].push_back(r.xi_a);
    rep.scalars["model_a"].push_back(r.model_a);
    rep.scalars["xi_b"].push_back(r.xi_b);
    rep.scalars["model_b"].push_back(r.model_b);
  }
  rep.finish();
  return rep;
}

QcInvarianceReport check_qc_invariance(const MetricField& src, const MetricField& transformed,
                                       const DistributionField& dist,
                                       const BiconformalPair& pair,
                                       const std::vector<Vec>& points, const Tolerances& tol,
                                       Exec exec) {
  QcInvarianceReport out;
  out.qc.name = "qc-invariance";
  out.qc.statement = "the (1,3) remainder R - a pi - b Phi - c Psi is unchanged";
  out.qc.points = points;
  out.qc.tolerance = tol.qc_invariance;
  out.scalar.name = "scalar-invariant";
  out.scalar.statement = "a' + k'^2 = e^{-2u} (a + k^2)";
  out.scalar.points = points;
  out.scalar.tolerance = tol.scalar_invariant;
  out.ricci.name = "ricci-invariant";
  out.ricci.statement = "the traced remainder of rho is unchanged";
  out.ricci.points = points;
  out.ricci.tolerance = tol.qc_invariance;

  const DistributionField tdist = radial_distribution(transformed);
  const int n = src.n;
  const int d = src.dim();

  struct Row { double qc, scalar, ricci, a_k2_src, a_k2_tr; };
  auto rows = map_indexed<Row>(points.size(), [&](std::size_t i) {
    const Vec& p = points[i];
    const double r = p.norm();

    const AdaptedFrame f_src = frame_at(src, dist, p);
    const Tensor4 R_src = riemann(src, p, f_src);
    const QchCoefficients q_src = qch_decompose(R_src, n);
    const Tensor4 R_src_coord = riemann_coord(src, p);
    const StructureData s_src = coordinate_structure(src, dist, p);
    const Tensor4 qc_src = qc_tensor_with(R_src_coord, q_src, s_src);
    const Tensor4 r13_src = R_src_coord.contract_last(Mat(s_src.g.inverse()));

    const AdaptedFrame f_tr = frame_at(transformed, tdist, p);
    const Tensor4 R_tr = riemann(transformed, p, f_tr);
    const QchCoefficients q_tr = qch_decompose(R_tr, n);
    const Tensor4 R_tr_coord = riemann_coord(transformed, p);
    const StructureData s_tr = coordinate_structure(transformed, tdist, p);
    const Tensor4 qc_tr = qc_tensor_with(R_tr_coord, q_tr, s_tr);

    Tensor4 diff = qc_tr;
    diff -= qc_src;
    // Scale by the larger curvature magnitude; the source may be flat.
    const Tensor4 r13_tr = R_tr_coord.contract_last(Mat(s_tr.g.inverse()));
    const double qc_res =
        relative(diff.max_abs(), std::max({r13_src.max_abs(), r13_tr.max_abs(), 1e-6}));

    const double k_src = nabla_eta(src, dist, p).k;
    const double k_tr = nabla_eta(transformed, tdist, p).k;
    const double lhs = q_tr.a + k_tr * k_tr;
    const double rhs = std::exp(-2.0 * pair.u.at_r(r)) * (q_src.a + k_src * k_src);
    const double scalar_res = std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));

    // (0,2) invariant: the traced remainder of the Ricci tensor.
    auto traced = [&](const Tensor4& Rc, const StructureData& s, const CurvatureScalars& cs) {
      const Mat ginv = s.g.inverse();
      Mat rho = Mat::Zero(d, d);
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double acc = 0.0;
          for (int a = 0; a < d; ++a)
            for (int l = 0; l < d; ++l) acc += ginv(a, l) * Rc(a, j, k, l);
          rho(j, k) = acc;
        }
      Mat model = (cs.tau - 2.0 * cs.sigma) / (2.0 * (n - 1)) * s.g;
      const double w = (2.0 * n * cs.sigma - cs.tau) / (2.0 * (n - 1));
      model += w * (s.eta * s.eta.transpose() + s.eta_tilde * s.eta_tilde.transpose());
      return Mat(rho - model);
    };
    const CurvatureScalars cs_src = curvature_scalars(R_src, n);
    const CurvatureScalars cs_tr = curvature_scalars(R_tr, n);
    const Mat b_src = traced(R_src_coord, s_src, cs_src);
    const Mat b_tr = traced(R_tr_coord, s_tr, cs_tr);
    const double rho_scale = std::max(1.0, std::fabs(cs_src.tau) / d);
    const double ricci_res = relative((b_tr - b_src).cwiseAbs().maxCoeff(), rho_scale);

    return Row{qc_res, scalar_res, ricci_res, q_src.a + k_src * k_src, lhs};
  }, exec);

  for (const Row& r : rows) {
    out.qc.residuals.push_back(r.qc);
    out.scalar.residuals.push_back(r.scalar);
    out.ricci.residuals.push_back(r.ricci);
    out.scalar.scalars["a_plus_k2_source"].push_back(r.a_k2_src);
    out.scalar.scalars["a_plus_k2_transformed"].push_back(r.a_k2_tr);
  }
  out.qc.finish();
  out.scalar.finish();
  out.ricci.finish();
  return out;
}

CurvatureClass classify_sign(double value, double dead_zone) {
  if (std::fabs(value) < dead_zone) return CurvatureClass::Zero;
  return value > 0.0 ? CurvatureClass::Positive : CurvatureClass::Negative;
}

CurvatureClass classify(const MetricField& field, const DistributionField& dist, const Vec& p,
                        const Tolerances& tol) {
  const Tensor4 R = riemann(field, dist, p);
  const QchCoefficients q = qch_decompose(R, field.n);
  const double k = nabla_eta(field, dist, p).k;
  return classify_sign(q.a + k * k, tol.classify_dead_zone);
}

FlattenResult flatten(const MetricField& field, const DistributionField& dist, double r_lo,
                      double r_hi, const Tolerances& tol, Exec exec) {
  const Domain& dom = field.domain;
  if (r_lo <= 0.0) r_lo = std::max(dom.r0 + 0.12 * (dom.r1 - dom.r0), 0.3);
  if (r_hi <= 0.0) r_hi = dom.r1 - 0.35 * (dom.r1 - dom.r0);
  if (!(r_hi > r_lo)) throw std::invalid_argument("flatten: empty working annulus");
  const int n = field.n;
  const int d = field.dim();

  auto probe = [&](double r) {
    Vec p = Vec::Zero(d);
    p[0] = r;
    return p;
  };

  // Radial profiles of a, k and the arc-length weight, sampled once and
  // smoothed; the transform needs them C^2-clean.
  const int cheb_n = 32;
  struct Node { double a, k, w, r_norm, qc_rel; };
  const std::vector<double> grid = ChebyshevFit::nodes(r_lo, r_hi, cheb_n);
  auto nodes = map_indexed<Node>(grid.size(), [&](std::size_t i) {
    const Vec p = probe(grid[i]);
    const Tensor4 R = riemann(field, dist, p);
    const QchCoefficients q = qch_decompose(R, n);
    const NablaEta ne = nabla_eta(field, dist, p);
    const Mat g = field.value(p);
    return Node{q.a, ne.k, std::sqrt(g(0, 0)), R.max_abs(),
                q.residual / std::max(R.max_abs(), 1e-12)};
  }, exec);

  double r_scale = 0.0, qc_rel = 0.0;
  for (const Node& nd : nodes) {
    r_scale = std::max(r_scale, nd.r_norm);
    if (nd.r_norm > 1e-8) qc_rel = std::max(qc_rel, nd.qc_rel);
    if (!(nd.a + nd.k * nd.k > 0.0))
      throw std::domain_error("flatten: not biconformally flat (a + k^2 <= 0)");
  }
  if (r_scale < 1e-8)
    throw std::domain_error("flatten: already flat; the required dv vanishes");
  if (qc_rel > 10.0 * tol.qch_residual)
    throw std::domain_error("flatten: curvature remainder too large; field is not of "
                            "quasi-constant holomorphic curvatures");

  // Smooth interpolants (the sampled values carry differencing noise that
  // otherwise re-amplifies through the second derivatives of the result).
  auto fit_of = [&](auto member) {
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = nodes[i].*member;
    return ChebyshevFit(vals, r_lo, r_hi);
  };
  const ChebyshevFit fit_a = fit_of(&Node::a);
  const ChebyshevFit fit_k = fit_of(&Node::k);
  const ChebyshevFit fit_w = fit_of(&Node::w);
  const ChebyshevFit fit_a_d = fit_a.derivative();
  const ChebyshevFit fit_k_d = fit_k.derivative();

  RadialScalar v;
  v.value = [fit_a, fit_k](double rho) {
    const double r = std::sqrt(rho);
    const double a = fit_a(r), k = fit_k(r);
    return 0.5 * std::log((a + k * k) / (k * k));
  };
  v.d1 = [fit_a, fit_k, fit_a_d, fit_k_d](double rho) {
    const double r = std::sqrt(rho);
    const double a = fit_a(r), k = fit_k(r), da = fit_a_d(r), dk = fit_k_d(r);
    const double dv_dr = 0.5 * ((da + 2.0 * k * dk) / (a + k * k) - 2.0 * dk / k);
    return dv_dr / (2.0 * r);
  };

  BiconformalPair pair = make_biconformal_pair(
      v, [fit_k](double r) { return fit_k(r); }, r_lo, r_hi,
      [fit_w](double r) { return fit_w(r); }, 1e-9);

  FlattenResult result;
  result.pair = pair;
  result.flattened = biconformal_apply(field, dist, pair);

  CheckReport rep;
  rep.name = "flatten";
  rep.statement = "curvature of the transformed metric vanishes";
  rep.tolerance = tol.flatness;
  const double margin = 0.08 * (r_hi - r_lo);
  std::vector<Vec> checks = sample_points({r_lo + margin, r_hi - margin}, d, 8,
                                          /*seed=*/1234, 0.05);
  rep.points = checks;
  rep.residuals = map_indexed<double>(checks.size(), [&](std::size_t i) {
    const Tensor4 R0 = riemann_coord(field, checks[i]);
    const Tensor4 R1 = riemann_coord(result.flattened, checks[i]);
    return relative(R1.max_abs(), std::max(R0.max_abs(), 1e-10));
  }, exec);
  rep.finish();
  result.report = rep;
  return result;
}

}  // namespace kqch
