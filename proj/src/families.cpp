#include "kqch/families.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace kqch {

MetricField flat_metric(int n, double r0, double r1) {
  const int d = 2 * n;
  MetricField f;
  f.n = n;
  f.domain = {r0, r1};
  f.J = standard_complex_structure(n);
  f.value = [d](const Vec&) { return Mat::Identity(d, d); };
  f.derivative1 = [d](const Vec&) { return std::vector<Mat>(d, Mat::Zero(d, d)); };
  f.derivative2 = [d](const Vec&) {
    return std::vector<Mat>(static_cast<std::size_t>(d) * d, Mat::Zero(d, d));
  };
  f.name = "flat";
  return f;
}

MetricField potential_metric(const RadialScalar& f, int n, double r1) {
  const int d = 2 * n;
  // Positivity sweep; both eigenvalue families of the Hermitian form must
  // stay positive for g to be a metric.
  for (int i = 0; i <= 100; ++i) {
    const double r = r1 * i / 100.0;
    const double rho = r * r;
    const double fp = f.d1 ? f.d1(rho) : f.eval_d1(rho);
    const double fpp = f.eval_d2(rho);
    if (!(fp > 0.0) || !(fp + rho * fpp > 0.0)) {
      std::ostringstream msg;
      msg << "potential_metric: positivity fails at r = " << r;
      throw std::domain_error(msg.str());
    }
  }

  MetricField field;
  field.n = n;
  field.domain = {0.0, r1};
  field.J = standard_complex_structure(n);
  const Mat J = field.J;
  field.value = [f, d, J](const Vec& x) {
    const double rho = x.squaredNorm();
    const Vec y = J * x;
    Mat g = 2.0 * f.d1(rho) * Mat::Identity(d, d);
    g.noalias() += 2.0 * f.eval_d2(rho) * (x * x.transpose() + y * y.transpose());
    return g;
  };
  field.derivative1 = [f, d, J](const Vec& x) {
    const double rho = x.squaredNorm();
    const Vec y = J * x;
    const double f2 = f.eval_d2(rho), f3 = f.eval_d3(rho);
    const Mat rank1 = x * x.transpose() + y * y.transpose();
    std::vector<Mat> dg(d);
    for (int k = 0; k < d; ++k) {
      Mat m = 4.0 * f2 * x[k] * Mat::Identity(d, d) + 4.0 * f3 * x[k] * rank1;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double t = 0.0;
          if (i == k) t += x[j];
          if (j == k) t += x[i];
          t += J(i, k) * y[j] + y[i] * J(j, k);
          m(i, j) += 2.0 * f2 * t;
        }
      dg[k] = m;
    }
    return dg;
  };
  field.name = "potential";
  return field;
}

double pair_constraint_residual(const BiconformalPair& pair, double r) {
  const double w = pair.eta_weight ? pair.eta_weight(r) : 1.0;
  const double rhs = pair.k_at(r) * (std::exp(2.0 * pair.v.at_r(r)) - 1.0) * w;
  return std::fabs(2.0 * pair.u.dr_at(r) - rhs);
}

RadialScalar u_from_v(const RadialScalar& v, const std::function<double(double)>& k_at,
                      double r0, double r1, const std::function<double(double)>& eta_weight,
                      double quad_tol) {
  for (int i = 0; i <= 16; ++i) {
    const double r = r0 + (r1 - r0) * i / 16.0;
    const double k = k_at(r);
    if (!std::isfinite(k)) throw std::domain_error("u_from_v: k not finite on the domain");
  }
  auto integrand = [v, k_at, eta_weight](double r) {
    const double w = eta_weight ? eta_weight(r) : 1.0;
    return 0.5 * k_at(r) * (std::exp(2.0 * v.at_r(r)) - 1.0) * w;
  };
  auto table = std::make_shared<CumulativeIntegral>(integrand, r0, r1, quad_tol, 256);
  RadialScalar u;
  u.value = [table, r0, r1](double rho) {
    const double r = std::sqrt(rho);
    if (r < r0 - 1e-9 || r > r1 + 1e-9)
      throw std::domain_error("u_from_v: radius outside the integration range");
    return (*table)(std::min(std::max(r, r0), r1));
  };
  u.d1 = [integrand](double rho) {
    const double r = std::sqrt(rho);
    return integrand(r) / (2.0 * r);
  };
  return u;
}

BiconformalPair make_biconformal_pair(const RadialScalar& v,
                                      const std::function<double(double)>& k_at,
                                      double r0, double r1,
                                      const std::function<double(double)>& eta_weight,
                                      double quad_tol) {
  BiconformalPair pair;
  pair.v = v;
  pair.k_at = k_at;
  pair.eta_weight = eta_weight;
  pair.r0 = r0;
  pair.r1 = r1;
  pair.u = u_from_v(v, k_at, r0, r1, eta_weight, quad_tol);
  return pair;
}

BiconformalPair composed_pair(const BiconformalPair& p1, const BiconformalPair& p2) {
  BiconformalPair pair;
  pair.u = radial_sum(p1.u, p2.u);
  pair.v = radial_sum(p1.v, p2.v);
  pair.k_at = p1.k_at;
  pair.eta_weight = p1.eta_weight;
  pair.r0 = std::max(p1.r0, p2.r0);
  pair.r1 = std::min(p1.r1, p2.r1);
  return pair;
}

BiconformalPair second_stage_pair(const BiconformalPair& p1, const RadialScalar& v2,
                                  double quad_tol) {
  const BiconformalPair base = p1;
  auto k2 = [base](double r) {
    return std::exp(base.v.at_r(r) - base.u.at_r(r)) * base.k_at(r);
  };
  auto w2 = [base](double r) {
    const double w = base.eta_weight ? base.eta_weight(r) : 1.0;
    return std::exp(base.u.at_r(r) + base.v.at_r(r)) * w;
  };
  return make_biconformal_pair(v2, k2, base.r0, base.r1, w2, quad_tol);
}

namespace {

// g' = alpha(rho) g + beta(rho) (eta x eta + eta~ x eta~) for a radial
// structural field; analytic first derivatives whenever the source has
// them.
MetricField scaled_projector_transform(const MetricField& src,
                                       std::function<double(double)> alpha,
                                       std::function<double(double)> alpha_d1,
                                       std::function<double(double)> beta,
                                       std::function<double(double)> beta_d1,
                                       const Domain& domain, const std::string& name) {
  const int d = src.dim();
  const Mat J = src.J;
  auto src_value = src.value;
  auto src_d1 = src.derivative1;

  MetricField out;
  out.n = src.n;
  out.J = J;
  out.domain = domain;
  out.name = name;
  out.value = [src_value, alpha, beta, J](const Vec& x) {
    const double rho = x.squaredNorm();
    const Mat g = src_value(x);
    const Vec gx = g * x;
    const Vec gjx = g * (J * x);
    const double s2 = x.dot(gx);
    Mat gp = alpha(rho) * g;
    gp.noalias() += (beta(rho) / s2) * (gx * gx.transpose() + gjx * gjx.transpose());
    return gp;
  };
  if (src.derivative1) {
    out.derivative1 = [src_value, src_d1, alpha, alpha_d1, beta, beta_d1, J, d](const Vec& x) {
      const double rho = x.squaredNorm();
      const Mat g = src_value(x);
      const std::vector<Mat> dg = src_d1(x);
      const Vec jx = J * x;
      const Vec gx = g * x;
      const Vec gjx = g * jx;
      const double s = std::sqrt(x.dot(gx));
      const Vec eta = gx / s;
      const Vec eta_t = gjx / s;
      const double al = alpha(rho), be = beta(rho);
      const double dal = alpha_d1(rho), dbe = beta_d1(rho);

      std::vector<Mat> out_d(d);
      for (int k = 0; k < d; ++k) {
        const double ds = (x.dot(dg[k] * x) + 2.0 * gx[k]) / (2.0 * s);
        Vec deta = (dg[k] * x + g.col(k)) / s - eta * (ds / s);
        Vec deta_t = (dg[k] * jx + g * J.col(k)) / s - eta_t * (ds / s);
        Mat dP = deta * eta.transpose() + eta * deta.transpose()
                 + deta_t * eta_t.transpose() + eta_t * deta_t.transpose();
        Mat m = (2.0 * x[k] * dal) * g + al * dg[k];
        m.noalias() += (2.0 * x[k] * dbe) * (eta * eta.transpose() + eta_t * eta_t.transpose());
        m.noalias() += be * dP;
        out_d[k] = m;
      }
      return out_d;
    };
  }
  return out;
}

}  // namespace

MetricField biconformal_apply(const MetricField& src, const DistributionField& dist,
                              const BiconformalPair& pair) {
  (void)dist;  // the transform is radial by construction
  // Reject the identity limit: the transform requires dv != 0.
  double dv_max = 0.0;
  for (int i = 0; i <= 32; ++i) {
    const double r = pair.r0 + (pair.r1 - pair.r0) * i / 32.0;
    dv_max = std::max(dv_max, std::fabs(pair.v.dr_at(r)));
  }
  if (dv_max < 1e-12) throw std::invalid_argument("biconformal_apply: dv must be nonzero");
  for (int i = 0; i <= 32; ++i) {
    const double r = pair.r0 + 1e-6 + (pair.r1 - pair.r0 - 2e-6) * i / 32.0;
    const double res = pair_constraint_residual(pair, r);
    const double scale = std::max(1.0, std::fabs(pair.k_at(r)));
    if (res > 1e-6 * scale)
      throw std::invalid_argument("biconformal_apply: exponent pair violates 2du = k(e^{2v}-1)eta");
  }

  const RadialScalar u = pair.u, v = pair.v;
  auto alpha = [u](double rho) { return std::exp(2.0 * u.value(rho)); };
  auto alpha_d1 = [u](double rho) { return 2.0 * u.eval_d1(rho) * std::exp(2.0 * u.value(rho)); };
  auto beta = [u, v](double rho) {
    return std::exp(2.0 * u.value(rho)) * (std::exp(2.0 * v.value(rho)) - 1.0);
  };
  auto beta_d1 = [u, v](double rho) {
    const double eu = std::exp(2.0 * u.value(rho)), ev = std::exp(2.0 * v.value(rho));
    return 2.0 * u.eval_d1(rho) * eu * (ev - 1.0) + eu * 2.0 * v.eval_d1(rho) * ev;
  };
  Domain dom{std::max(src.domain.r0, pair.r0), std::min(src.domain.r1, pair.r1)};
  return scaled_projector_transform(src, alpha, alpha_d1, beta, beta_d1, dom,
                                    src.name + "+biconformal");
}

MetricField dilatational_apply(const MetricField& src, const DistributionField& dist,
                               const RadialScalar& q) {
  (void)dist;
  for (int i = 0; i <= 64; ++i) {
    const double r = src.domain.r0 + (src.domain.r1 - src.domain.r0) * i / 64.0;
    if (!(q.at_r(r) > 0.0)) {
      std::ostringstream msg;
      msg << "dilatational_apply: q <= 0 at r = " << r;
      throw std::domain_error(msg.str());
    }
  }
  auto alpha = [](double) { return 1.0; };
  auto alpha_d1 = [](double) { return 0.0; };
  auto beta = [q](double rho) { return q.value(rho) - 1.0; };
  auto beta_d1 = [q](double rho) { return q.eval_d1(rho); };
  return scaled_projector_transform(src, alpha, alpha_d1, beta, beta_d1, src.domain,
                                    src.name + "+dilatational");
}

MetricField biconformally_flat_normal_form(const RadialScalar& v, int n, double r0, double r1,
                                           double quad_tol) {
  const int d = 2 * n;
  const double rho0 = r0 * r0, rho1 = r1 * r1;
  auto minus_u_integrand = [v](double rho) {
    return (std::exp(-2.0 * v.value(rho)) - 1.0) / (2.0 * rho);
  };
  auto minus_u = std::make_shared<CumulativeIntegral>(minus_u_integrand, rho0, rho1,
                                                      quad_tol, 256);

  auto Efun = [minus_u, rho0, rho1](double rho) {
    rho = std::min(std::max(rho, rho0), rho1);
    return std::exp(2.0 * (*minus_u)(rho));
  };
  auto Gfun = [Efun, v](double rho) {
    return Efun(rho) * (std::exp(-2.0 * v.value(rho)) - 1.0) / rho;
  };
  // dE/drho = 2 E * d(-u)/drho; dG via the product rule.
  auto dE = [Efun, minus_u_integrand](double rho) {
    return 2.0 * Efun(rho) * minus_u_integrand(rho);
  };
  auto dG = [Efun, dE, v](double rho) {
    const double ev = std::exp(-2.0 * v.value(rho));
    const double dev = -2.0 * v.eval_d1(rho) * ev;
    return dE(rho) * (ev - 1.0) / rho + Efun(rho) * (dev / rho - (ev - 1.0) / (rho * rho));
  };

  MetricField field;
  field.n = n;
  field.domain = {r0, r1};
  field.J = standard_complex_structure(n);
  const Mat J = field.J;
  field.value = [Efun, Gfun, d, J](const Vec& x) {
    const double rho = x.squaredNorm();
    const Vec y = J * x;
    Mat g = Efun(rho) * Mat::Identity(d, d);
    g.noalias() += Gfun(rho) * (x * x.transpose() + y * y.transpose());
    return g;
  };
  field.derivative1 = [Efun, Gfun, dE, dG, d, J](const Vec& x) {
    const double rho = x.squaredNorm();
    const Vec y = J * x;
    const Mat rank1 = x * x.transpose() + y * y.transpose();
    const double e1 = dE(rho), g1 = dG(rho), G = Gfun(rho);
    std::vector<Mat> out(d);
    for (int k = 0; k < d; ++k) {
      Mat m = 2.0 * x[k] * e1 * Mat::Identity(d, d) + 2.0 * x[k] * g1 * rank1;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double t = 0.0;
          if (i == k) t += x[j];
          if (j == k) t += x[i];
          t += J(i, k) * y[j] + y[i] * J(j, k);
          m(i, j) += G * t;
        }
      out[k] = m;
    }
    return out;
  };
  field.name = "normal-form";
  return field;
}

std::function<double(double)> radial_arc_weight(const MetricField& field) {
  auto value = field.value;
  const int d = field.dim();
  return [value, d](double r) {
    Vec p = Vec::Zero(d);
    p[0] = r;
    const Mat g = value(p);
    return std::sqrt(g(0, 0));
  };
}

}  // namespace kqch
