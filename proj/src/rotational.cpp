#include "kqch/rotational.hpp"

#include "kqch/diffgeo.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kqch {

RotationalProfile profile_sin(double s_min, double s_max) {
  RotationalProfile p;
  p.t = [](double s) { return std::sin(s); };
  p.t1 = [](double s) { return std::cos(s); };
  p.t2 = [](double s) { return -std::sin(s); };
  p.t3 = [](double s) { return -std::cos(s); };
  p.s_min = s_min;
  p.s_max = s_max;
  return p;
}

RotationalProfile profile_ramp(double s_min, double s_max) {
  RotationalProfile p;
  p.t = [](double s) { return 1.0 + 0.5 * std::log(std::cosh(s)); };
  p.t1 = [](double s) { return 0.5 * std::tanh(s); };
  p.t2 = [](double s) {
    const double c = std::cosh(s);
    return 0.5 / (c * c);
  };
  p.t3 = [](double s) {
    const double c = std::cosh(s);
    return -std::tanh(s) / (c * c);
  };
  p.s_min = s_min;
  p.s_max = s_max;
  return p;
}

RotationalProfile profile_const_curvature(double a, double s_min, double s_max) {
  if (!(a > 0.0)) throw std::domain_error("profile_const_curvature: a must be positive");
  const double w = 0.5 * std::sqrt(a);
  RotationalProfile p;
  p.t = [a, w](double s) { return (2.0 / std::sqrt(a)) * std::tanh(w * s); };
  p.t1 = [w](double s) {
    const double c = std::cosh(w * s);
    return 1.0 / (c * c);
  };
  p.t2 = [a, w](double s) {
    const double c = std::cosh(w * s);
    return -2.0 * w * std::tanh(w * s) / (c * c);
  };
  p.t3 = [a, w](double s) {
    const double c = std::cosh(w * s);
    const double th = std::tanh(w * s);
    return -2.0 * w * w * (1.0 - 3.0 * th * th) / (c * c);
  };
  p.s_min = s_min;
  p.s_max = s_max;
  return p;
}

RotationalProfile profile_linear(double s0, double s_min, double s_max) {
  RotationalProfile p;
  p.t = [s0](double s) { return s0 + s; };
  p.t1 = [](double) { return 1.0; };
  p.t2 = [](double) { return 0.0; };
  p.t3 = [](double) { return 0.0; };
  p.s_min = s_min;
  p.s_max = s_max;
  return p;
}

RotationalProfile profile_tangent_flat(double t0, double half_span) {
  // t' = 1 - s^4/4 reaches 1 at s = 0 with t'' = t''' = 0 there, so the
  // axial component q' = sqrt(1 - t'^2) stays smooth through the flat
  // parallel.
  RotationalProfile p;
  p.t = [t0](double s) { return t0 + s - std::pow(s, 5) / 20.0; };
  p.t1 = [](double s) { return 1.0 - std::pow(s, 4) / 4.0; };
  p.t2 = [](double s) { return -std::pow(s, 3); };
  p.t3 = [](double s) { return -3.0 * s * s; };
  p.s_min = -half_span;
  p.s_max = half_span;
  return p;
}

void require_admissible(const RotationalProfile& profile, int samples) {
  for (int i = 0; i <= samples; ++i) {
    const double s = profile.s_min + (profile.s_max - profile.s_min) * i / samples;
    const double t = profile.t(s), t1 = profile.t1(s);
    if (!(t > 0.0) || !(t1 > 0.0) || t1 > 1.0 + 1e-12) {
      std::ostringstream msg;
      msg << "rotational profile inadmissible at s = " << s << " (t = " << t
          << ", t' = " << t1 << ")";
      throw std::domain_error(msg.str());
    }
  }
}

RadialChart::RadialChart(const RotationalProfile& profile) : profile_(profile) {
  require_admissible(profile);
  s_ref_ = profile.s_min;
  auto inv_t = [profile](double s) { return 1.0 / profile.t(s); };
  log_rho_ = std::make_shared<CumulativeIntegral>(inv_t, profile.s_min, profile.s_max,
                                                  1e-12, 512);
  r_min_ = rho(profile.s_min);
  r_max_ = rho(profile.s_max);
}

double RadialChart::rho(double s) const { return std::exp((*log_rho_)(s)); }

double RadialChart::s_of_r(double r) const {
  const double target = std::log(std::min(std::max(r, r_min_), r_max_));
  double s = 0.5 * (profile_.s_min + profile_.s_max);
  for (int it = 0; it < 60; ++it) {
    const double f = (*log_rho_)(s) - target;
    const double step = f * profile_.t(s);
    s -= step;
    s = std::min(std::max(s, profile_.s_min), profile_.s_max);
    if (std::fabs(step) < 1e-14 * std::max(1.0, std::fabs(s))) break;
  }
  return s;
}

namespace {

struct ChartData {
  RotationalProfile profile;
  std::shared_ptr<RadialChart> chart;
};

// Conformal factor of the induced metric and its radial derivative.
// A = (t/r)^2, dA/dr = 2 t^2 (t' - 1) / r^3.
double conformal_factor(const ChartData& c, double r, double* dA = nullptr) {
  const double s = c.chart->s_of_r(r);
  const double t = c.profile.t(s), t1 = c.profile.t1(s);
  if (dA) *dA = 2.0 * t * t * (t1 - 1.0) / (r * r * r);
  return t * t / (r * r);
}

}  // namespace

MetricField rotational_induced_metric(const RotationalProfile& profile, int n) {
  require_admissible(profile);
  ChartData cd{profile, std::make_shared<RadialChart>(profile)};
  const int d = 2 * n;

  MetricField f;
  f.n = n;
  f.domain = {cd.chart->r_min(), cd.chart->r_max()};
  f.J = standard_complex_structure(n);
  f.value = [cd, d](const Vec& x) {
    return Mat(conformal_factor(cd, x.norm()) * Mat::Identity(d, d));
  };
  f.derivative1 = [cd, d](const Vec& x) {
    const double r = x.norm();
    double dA = 0.0;
    conformal_factor(cd, r, &dA);
    std::vector<Mat> dg(d);
    for (int k = 0; k < d; ++k) dg[k] = (dA * x[k] / r) * Mat::Identity(d, d);
    return dg;
  };
  f.name = "rotational-induced";
  return f;
}

MetricField rotational_metric(const RotationalProfile& profile, int n) {
  require_admissible(profile);
  ChartData cd{profile, std::make_shared<RadialChart>(profile)};
  const int d = 2 * n;

  MetricField f;
  f.n = n;
  f.domain = {cd.chart->r_min(), cd.chart->r_max()};
  f.J = standard_complex_structure(n);
  const Mat J = f.J;
  f.value = [cd, d, J](const Vec& x) {
    const double r = x.norm();
    const double s = cd.chart->s_of_r(r);
    const double t = cd.profile.t(s), t1 = cd.profile.t1(s);
    const double A = t * t / (r * r);
    const double C = (t1 - 1.0) * t * t / (r * r * r * r);
    const Vec y = J * x;
    Mat g = A * Mat::Identity(d, d);
    g.noalias() += C * (x * x.transpose() + y * y.transpose());
    return g;
  };
  f.derivative1 = [cd, d, J](const Vec& x) {
    const double r = x.norm();
    const double s = cd.chart->s_of_r(r);
    const double t = cd.profile.t(s), t1 = cd.profile.t1(s), t2 = cd.profile.t2(s);
    const double r3 = r * r * r, r5 = r3 * r * r;
    const double C = (t1 - 1.0) * t * t / (r3 * r);
    const double dA = 2.0 * t * t * (t1 - 1.0) / r3;
    const double dC = t * t * t * t2 / r5 + (t1 - 1.0) * (2.0 * t1 - 4.0) * t * t / r5;
    const Vec y = J * x;
    const Mat rank1 = x * x.transpose() + y * y.transpose();
    std::vector<Mat> dg(d);
    for (int k = 0; k < d; ++k) {
      Mat m = (dA * x[k] / r) * Mat::Identity(d, d) + (dC * x[k] / r) * rank1;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double tterm = 0.0;
          if (i == k) tterm += x[j];
          if (j == k) tterm += x[i];
          tterm += J(i, k) * y[j] + y[i] * J(j, k);
          m(i, j) += C * tterm;
        }
      dg[k] = m;
    }
    return dg;
  };
  f.name = "rotational";
  return f;
}

QchCoefficients rotational_coefficients(const RotationalProfile& profile, double s) {
  const double t = profile.t(s), t1 = profile.t1(s), t2 = profile.t2(s), t3 = profile.t3(s);
  if (std::fabs(t1) < 1e-10)
    throw std::domain_error("rotational_coefficients: t' vanishes");
  QchCoefficients q;
  q.a = 4.0 * (1.0 - t1) / (t * t);
  q.b = 8.0 * ((t1 - 1.0) / (t * t) - t2 / (2.0 * t * t1));
  q.c = 4.0 * (1.0 - t1) / (t * t) + 5.0 * t2 / (2.0 * t * t1)
        + (t2 * t2 - t1 * t3) / (2.0 * t1 * t1 * t1);
  return q;
}

std::pair<double, double> warped_curvature_coefficients(const RotationalProfile& profile,
                                                        double s) {
  const double t = profile.t(s), t1 = profile.t1(s), t2 = profile.t2(s);
  return {(1.0 - t1 * t1) / (t * t), -(1.0 - t1 * t1 + t * t2) / (t * t)};
}

Tensor4 warped_curvature_tensor(const RotationalProfile& profile, const RadialChart& chart,
                                const Vec& p, int n) {
  const int d = 2 * n;
  const double r = p.norm();
  const double s = chart.s_of_r(r);
  const auto [c1, c2] = warped_curvature_coefficients(profile, s);
  const double t = profile.t(s);
  const double A = t * t / (r * r);
  const Mat g = A * Mat::Identity(d, d);
  const Vec xi = p / std::sqrt(A * p.squaredNorm());
  const Vec eta = g * xi;

  Tensor4 R(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double pi_bar = g(j, k) * g(i, l) - g(i, k) * g(j, l);
          const double phi_bar = g(j, k) * eta[i] * eta[l] - g(i, k) * eta[j] * eta[l]
                                 + eta[j] * eta[k] * g(i, l) - eta[i] * eta[k] * g(j, l);
          R(i, j, k, l) = c1 * pi_bar + c2 * phi_bar;
        }
  return R;
}

namespace {

// Compares nabla J_lhs of the induced metric against the closed-form model
// built from the associated structure J_rhs; the two coincide only for the
// structure the hypersurface actually carries.
double nabla_j_residual_impl(const RotationalProfile& profile, int n, double s,
                             const Mat& J_lhs, const Mat& J_rhs) {
  const int d = 2 * n;
  const RadialChart chart(profile);
  MetricField gbar = rotational_induced_metric(profile, n);
  Vec p = Vec::Zero(d);
  p[0] = chart.rho(s);

  const Christoffel gamma = christoffel(gbar, p);
  const Mat g = gbar.value(p);
  const double t = profile.t(s), t1 = profile.t1(s);
  const double coeff = (t1 - 1.0) / t;

  const Vec xi = p / std::sqrt(p.dot(g * p));
  const Vec jxi = J_rhs * xi;
  const Vec eta = g * xi;
  const Vec eta_t = g * jxi;
  const Mat omega = J_rhs.transpose() * g;

  double res = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double lhs = 0.0;
        for (int m = 0; m < d; ++m)
          lhs += gamma[k](i, m) * J_lhs(m, j) - gamma[m](i, j) * J_lhs(k, m);
        const double rhs = coeff * (g(i, j) * jxi[k] - eta_t[j] * (i == k ? 1.0 : 0.0)
                                    - eta[j] * J_rhs(k, i) + omega(i, j) * xi[k]);
        res = std::max(res, std::fabs(lhs - rhs));
      }
  return res;
}

}  // namespace

double nabla_j_residual(const RotationalProfile& profile, int n, double s) {
  const Mat J = standard_complex_structure(n);
  return nabla_j_residual_impl(profile, n, s, J, J);
}

double nabla_j_residual_mismatched(const RotationalProfile& profile, int n, double s) {
  Mat J = standard_complex_structure(n);
  // Flip the orientation of the first complex pair; still an almost complex
  // structure compatible with the metric, but not the one associated with
  // the hypersurface.
  J(0, 1) = 1.0;
  J(1, 0) = -1.0;
  return nabla_j_residual_impl(profile, n, s, J, standard_complex_structure(n));
}

double constant_curvature_meridian_y(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("constant_curvature_meridian: a must be positive");
  const double u = std::sqrt(8.0 - a * x * x);
  return (u + std::log((u - 2.0) / (u + 2.0))) / std::sqrt(a);
}

std::vector<std::pair<double, double>> constant_curvature_meridian(double a, int samples) {
  if (!(a > 0.0)) throw std::domain_error("constant_curvature_meridian: a must be positive");
  if (samples < 2) throw std::invalid_argument("constant_curvature_meridian: samples < 2");
  const double x_max = 2.0 / std::sqrt(a);
  const double margin = 1e-3 * x_max;
  std::vector<std::pair<double, double>> pts(samples);
  for (int i = 0; i < samples; ++i) {
    const double x = margin + (x_max - 2.0 * margin) * i / (samples - 1);
    pts[i] = {x, constant_curvature_meridian_y(a, x)};
  }
  return pts;
}

double meridian_b_residual(double a, int samples) {
  const double x_max = 2.0 / std::sqrt(a);
  const double h = 1e-3 * x_max;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = (0.05 + 0.75 * i / (samples - 1)) * x_max;
    auto y = [a](double xx) { return constant_curvature_meridian_y(a, xx); };
    const double y1 = (8.0 * (y(x + h) - y(x - h)) - (y(x + 2 * h) - y(x - 2 * h))) / (12.0 * h);
    const double y2 = (16.0 * (y(x + h) + y(x - h)) - (y(x + 2 * h) + y(x - 2 * h))
                       - 30.0 * y(x)) / (12.0 * h * h);
    const double w = 1.0 + y1 * y1;
    const double t1 = 1.0 / std::sqrt(w);    // dt/ds with t = x, s = arc length
    const double t2 = -y1 * y2 / (w * w);    // d^2 t / ds^2
    worst = std::max(worst, std::fabs(t2 - 2.0 * t1 * (t1 - 1.0) / x));
  }
  return worst;
}

RotationalProfile solve_b_zero_ode(double a_target, double t0, double s_back, double s_fwd,
                                   double tol) {
  if (!(t0 > 0.0)) throw std::domain_error("solve_b_zero_ode: t0 must be positive");
  const double t1_0 = 1.0 - a_target * t0 * t0 / 4.0;
  if (!(t1_0 > 0.0) || t1_0 > 1.0)
    throw std::domain_error("solve_b_zero_ode: initial slope outside (0, 1]");
  // Unit slope is the stationary flat case t'' = 0.
  if (!(s_back <= 0.0) || !(s_fwd >= 0.0))
    throw std::invalid_argument("solve_b_zero_ode: span must contain 0");

  auto rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = y[1];
    dy[1] = 2.0 * y[1] * (y[1] - 1.0) / y[0];
  };
  auto ok = [](double, const std::vector<double>& y) {
    return y[0] > 0.0 && y[1] > 0.0 && y[1] <= 1.0 + 1e-12;
  };

  auto fwd = std::make_shared<OdeSolution>(
      solve_ivp(rhs, 0.0, s_fwd, {t0, t1_0}, tol, ok));
  auto bwd = std::make_shared<OdeSolution>(
      solve_ivp(rhs, 0.0, s_back, {t0, t1_0}, tol, ok));

  auto pick = [fwd, bwd](double s) -> const OdeSolution& {
    return (s >= 0.0) ? *fwd : *bwd;
  };
  RotationalProfile prof;
  prof.t = [pick](double s) { return pick(s).eval(s, 0); };
  prof.t1 = [pick](double s) { return pick(s).eval(s, 1); };
  prof.t2 = [pick](double s) {
    const double t = pick(s).eval(s, 0), t1 = pick(s).eval(s, 1);
    return 2.0 * t1 * (t1 - 1.0) / t;
  };
  prof.t3 = [pick](double s) {
    const double t = pick(s).eval(s, 0), t1 = pick(s).eval(s, 1);
    const double t2 = 2.0 * t1 * (t1 - 1.0) / t;
    return 2.0 * t2 * (2.0 * t1 - 1.0) / t - 2.0 * t1 * t1 * (t1 - 1.0) / (t * t);
  };
  prof.s_min = s_back;
  prof.s_max = s_fwd;
  return prof;
}

}  // namespace kqch
