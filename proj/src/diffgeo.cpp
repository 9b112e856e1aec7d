#include "kqch/diffgeo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kqch {

namespace {

const double kFdBase = std::pow(std::numeric_limits<double>::epsilon(), 0.2);

double fd_step(double coord) { return kFdBase * std::max(1.0, std::fabs(coord)); }

// 4th-order central difference of a matrix-valued map along coordinate k.
template <typename F>
Mat central4(const F& f, const Vec& p, int k, double h) {
  Vec q = p;
  q[k] = p[k] + h;
  Mat fp1 = f(q);
  q[k] = p[k] - h;
  Mat fm1 = f(q);
  q[k] = p[k] + 2.0 * h;
  Mat fp2 = f(q);
  q[k] = p[k] - 2.0 * h;
  Mat fm2 = f(q);
  return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
}

template <typename F>
Vec central4_vec(const F& f, const Vec& p, int k, double h) {
  Vec q = p;
  q[k] = p[k] + h;
  Vec fp1 = f(q);
  q[k] = p[k] - h;
  Vec fm1 = f(q);
  q[k] = p[k] + 2.0 * h;
  Vec fp2 = f(q);
  q[k] = p[k] - 2.0 * h;
  Vec fm2 = f(q);
  return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
}

Christoffel christoffel_from(const Mat& g, const std::vector<Mat>& dg) {
  const int d = static_cast<int>(g.rows());
  const Mat ginv = g.inverse();
  Christoffel gamma(d, Mat::Zero(d, d));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) {
        double s = 0.0;
        for (int m = 0; m < d; ++m)
          s += ginv(k, m) * (dg[i](m, j) + dg[j](m, i) - dg[m](i, j));
        gamma[k](i, j) = 0.5 * s;
        gamma[k](j, i) = gamma[k](i, j);
      }
  return gamma;
}

}  // namespace

void require_stencil_margin(const MetricField& field, const Vec& p, int order) {
  if (!field.domain.contains(p))
    throw std::domain_error("point outside the chart domain");
  double h = 0.0;
  for (int k = 0; k < p.size(); ++k) h = std::max(h, fd_step(p[k]));
  const double need = 2.5 * order * h;
  if (field.domain.boundary_distance(p) < need)
    throw std::domain_error("point too close to the domain boundary for the stencil");
}

std::vector<Mat> metric_d1(const MetricField& field, const Vec& p) {
  if (field.derivative1) return field.derivative1(p);
  const int d = field.dim();
  std::vector<Mat> dg(d);
  for (int k = 0; k < d; ++k) dg[k] = central4(field.value, p, k, fd_step(p[k]));
  return dg;
}

Christoffel christoffel(const MetricField& field, const Vec& p) {
  require_stencil_margin(field, p, field.derivative1 ? 0 : 1);
  return christoffel_from(field.value(p), metric_d1(field, p));
}

double metric_compatibility_residual(const MetricField& field, const Vec& p) {
  const Mat g = field.value(p);
  const std::vector<Mat> dg = metric_d1(field, p);
  const Christoffel gamma = christoffel(field, p);
  const int d = field.dim();
  double res = 0.0, scale = 1e-30;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = dg[k](i, j);
        for (int m = 0; m < d; ++m)
          s -= gamma[m](k, i) * g(m, j) + gamma[m](k, j) * g(i, m);
        res = std::max(res, std::fabs(s));
        scale = std::max(scale, std::fabs(dg[k](i, j)));
      }
  return res / std::max(scale, 1.0);
}

namespace {

// dGamma[a][k](i,j) = d_a Gamma^k_{ij}; analytic when second derivatives
// are available, otherwise differences of the Christoffel map.
std::vector<Christoffel> christoffel_d1(const MetricField& field, const Vec& p) {
  const int d = field.dim();
  std::vector<Christoffel> dgamma(d);
  if (field.derivative1 && field.derivative2) {
    const Mat g = field.value(p);
    const Mat ginv = g.inverse();
    const std::vector<Mat> dg = field.derivative1(p);
    const std::vector<Mat> d2g = field.derivative2(p);
    for (int a = 0; a < d; ++a) {
      const Mat dginv = -ginv * dg[a] * ginv;
      dgamma[a].assign(d, Mat::Zero(d, d));
      for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int m = 0; m < d; ++m) {
              s += dginv(k, m) * (dg[i](m, j) + dg[j](m, i) - dg[m](i, j));
              s += ginv(k, m) * (d2g[a * d + i](m, j) + d2g[a * d + j](m, i)
                                 - d2g[a * d + m](i, j));
            }
            dgamma[a][k](i, j) = 0.5 * s;
            dgamma[a][k](j, i) = dgamma[a][k](i, j);
          }
    }
    return dgamma;
  }
  auto gamma_flat = [&](const Vec& q) {
    const Christoffel gm = christoffel_from(field.value(q), metric_d1(field, q));
    Mat packed(d * d, d);
    for (int k = 0; k < d; ++k) packed.block(k * d, 0, d, d) = gm[k];
    return packed;
  };
  for (int a = 0; a < d; ++a) {
    const Mat dp = central4(gamma_flat, p, a, fd_step(p[a]));
    dgamma[a].resize(d);
    for (int k = 0; k < d; ++k) dgamma[a][k] = dp.block(k * d, 0, d, d);
  }
  return dgamma;
}

}  // namespace

Tensor4 riemann_coord(const MetricField& field, const Vec& p) {
  require_stencil_margin(field, p, field.derivative2 ? 0 : (field.derivative1 ? 1 : 2));
  const int d = field.dim();
  const Mat g = field.value(p);
  const Christoffel gamma = christoffel_from(g, metric_d1(field, p));
  const std::vector<Christoffel> dgamma = christoffel_d1(field, p);

  Tensor4 R(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j)
      for (int k = 0; k < d; ++k) {
        // R(e_i, e_j) e_k, upper index m.
        Vec rm(d);
        for (int m = 0; m < d; ++m) {
          double s = dgamma[i][m](j, k) - dgamma[j][m](i, k);
          for (int a = 0; a < d; ++a)
            s += gamma[m](i, a) * gamma[a](j, k) - gamma[m](j, a) * gamma[a](i, k);
          rm[m] = s;
        }
        const Vec lowered = g * rm;
        for (int l = 0; l < d; ++l) {
          R(i, j, k, l) = lowered[l];
          R(j, i, k, l) = -lowered[l];
        }
      }
  return R;
}

Tensor4 riemann(const MetricField& field, const Vec& p, const AdaptedFrame& frame) {
  return riemann_coord(field, p).project(frame.vectors);
}

Tensor4 riemann(const MetricField& field, const DistributionField& dist, const Vec& p) {
  return riemann(field, p, frame_at(field, dist, p));
}

NablaEta nabla_eta(const MetricField& field, const DistributionField& dist, const Vec& p) {
  require_stencil_margin(field, p, 1);
  const int d = field.dim();
  const int n = field.n;
  const Mat g = field.value(p);
  const Mat& J = field.J;
  const Christoffel gamma = christoffel_from(g, metric_d1(field, p));

  auto eta_at = [&](const Vec& q) { return Vec(field.value(q) * dist.xi(q)); };
  auto eta_tilde_at = [&](const Vec& q) { return Vec(field.value(q) * (J * dist.xi(q))); };

  const Vec eta = eta_at(p);
  const Vec eta_t = eta_tilde_at(p);

  Mat de(d, d), det(d, d);  // de(i, j) = d_i eta_j
  for (int i = 0; i < d; ++i) {
    const double h = fd_step(p[i]);
    de.row(i) = central4_vec(eta_at, p, i, h).transpose();
    det.row(i) = central4_vec(eta_tilde_at, p, i, h).transpose();
  }

  Mat ne = Mat::Zero(d, d), net = Mat::Zero(d, d);  // coordinate components
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double corr = 0.0, corr_t = 0.0;
      for (int m = 0; m < d; ++m) {
        corr += gamma[m](i, j) * eta[m];
        corr_t += gamma[m](i, j) * eta_t[m];
      }
      ne(i, j) = de(i, j) - corr;
      net(i, j) = det(i, j) - corr_t;
    }

  const AdaptedFrame frame = frame_at(field, dist, p);
  const Mat& V = frame.vectors;

  NablaEta out;
  out.nabla_eta = V.transpose() * ne * V;
  out.nabla_eta_tilde = V.transpose() * net * V;
  for (int a = 2; a < d; ++a) {
    out.div0_xi += out.nabla_eta(a, a);
    out.div0_Jxi += out.nabla_eta_tilde(a, a);
  }
  out.k = out.div0_xi / (n - 1);
  out.p = out.nabla_eta(0, 1);
  out.p_star = out.nabla_eta_tilde(1, 0);
  out.theta = Vec::Zero(d);
  out.theta_star = Vec::Zero(d);
  for (int a = 2; a < d; ++a) {
    out.theta[a] = out.nabla_eta(0, a);
    out.theta_star[a] = out.nabla_eta_tilde(1, a);
  }
  return out;
}

Involutivity involutivity(const MetricField& field, const DistributionField& dist,
                          const Vec& p, double tol) {
  const NablaEta ne = nabla_eta(field, dist, p);
  const int d = field.dim();
  Involutivity inv;
  for (int a = 2; a < d; ++a)
    for (int b = 2; b < d; ++b) {
      const double de = ne.nabla_eta(a, b) - ne.nabla_eta(b, a);
      const double det = ne.nabla_eta_tilde(a, b) - ne.nabla_eta_tilde(b, a);
      inv.res_D = std::max(inv.res_D, std::max(std::fabs(de), std::fabs(det)));
    }
  for (int a = 2; a < d; ++a)
    inv.res_Dperp = std::max(inv.res_Dperp, std::fabs(ne.theta[a] + ne.theta_star[a]));
  // Delta = ker(eta) is spanned by J xi and D; Frobenius reduces to
  // d eta = 0 on Delta x Delta.
  for (int a = 1; a < d; ++a)
    for (int b = 1; b < d; ++b) {
      const double de = ne.nabla_eta(a, b) - ne.nabla_eta(b, a);
      inv.res_Delta = std::max(inv.res_Delta, std::fabs(de));
    }
  inv.D = inv.res_D < tol;
  inv.Dperp = inv.res_Dperp < tol;
  inv.Delta = inv.res_Delta < tol;
  return inv;
}

namespace {

// dOmega_{aij} over coordinate indices; Omega = J^T g.
std::vector<Mat> d_omega(const MetricField& field, const Vec& p) {
  const int d = field.dim();
  const std::vector<Mat> dg = metric_d1(field, p);
  std::vector<Mat> dOm(d);
  for (int a = 0; a < d; ++a) dOm[a] = field.J.transpose() * dg[a];
  std::vector<Mat> out(d, Mat::Zero(d, d));
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        out[a](i, j) = dOm[a](i, j) - dOm[i](a, j) + dOm[j](a, i);
  return out;
}

}  // namespace

Vec lee_form(const MetricField& field, const Vec& p) {
  require_stencil_margin(field, p, field.derivative1 ? 0 : 1);
  const int d = field.dim();
  const std::vector<Mat> dOmega = d_omega(field, p);
  // Any g-orthonormal J-adapted frame works for the contraction.
  const AdaptedFrame frame = frame_at(field, radial_distribution(field), p);
  Vec omega = Vec::Zero(d);
  for (int m = 0; m < d; ++m) {
    double s = 0.0;
    for (int b = 0; b < d; ++b) {
      const Vec u = frame.vectors.col(b);
      const Vec ju = field.J * u;
      s += u.dot(dOmega[m] * ju);
    }
    omega[m] = s / (2.0 * (field.n - 1));
  }
  return omega;
}

double kahler_residual(const MetricField& field, const Vec& p) {
  const std::vector<Mat> dOmega = d_omega(field, p);
  double r = 0.0;
  for (const Mat& m : dOmega) r = std::max(r, m.cwiseAbs().maxCoeff());
  return r;
}

double w4_residual(const MetricField& field, const Vec& p) {
  const int d = field.dim();
  const std::vector<Mat> dOmega = d_omega(field, p);
  const Vec omega = lee_form(field, p);
  const Mat Om = field.J.transpose() * field.value(p);
  double r = 0.0;
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double wedge = omega[a] * Om(i, j) + omega[i] * Om(j, a) + omega[j] * Om(a, i);
        r = std::max(r, std::fabs(dOmega[a](i, j) - wedge));
      }
  return r;
}

AdaptedFrame principal_frame(const MetricField& field, const DistributionField& dist,
                             const Vec& p) {
  const NablaEta ne = nabla_eta(field, dist, p);
  const double norm2 = ne.div0_xi * ne.div0_xi + ne.div0_Jxi * ne.div0_Jxi;
  if (norm2 <= 1e-12)
    throw std::domain_error("principal_frame: both relative divergences vanish");
  const double norm = std::sqrt(norm2);
  const Vec xi = dist.xi(p);
  const Vec rotated = (ne.div0_xi * xi + ne.div0_Jxi * (field.J * xi)) / norm;
  return adapted_frame(tangent_space_at(field, p), rotated);
}

double directional_derivative(const std::function<double(const Vec&)>& f, const Vec& p,
                              const Vec& dir, double h) {
  const auto at = [&](double t) { return f(p + t * dir); };
  return (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
}

Bianchi2 second_bianchi_residual(const MetricField& field, const Vec& p) {
  const int d = field.dim();
  const Christoffel gamma = christoffel(field, p);

  // nabla_a R_{ijkl} = d_a R_{ijkl} - Gamma-corrections on all four slots.
  std::vector<Tensor4> dR(d, Tensor4(d));
  const double h = 1e-4 * std::max(1.0, p.norm());
  for (int a = 0; a < d; ++a) {
    Vec q = p;
    q[a] = p[a] + h;
    const Tensor4 Rp = riemann_coord(field, q);
    q[a] = p[a] - h;
    const Tensor4 Rm = riemann_coord(field, q);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            dR[a](i, j, k, l) = (Rp(i, j, k, l) - Rm(i, j, k, l)) / (2.0 * h);
  }
  const Tensor4 R = riemann_coord(field, p);
  auto nabla = [&](int a, int i, int j, int k, int l) {
    double s = dR[a](i, j, k, l);
    for (int m = 0; m < d; ++m) {
      s -= gamma[m](a, i) * R(m, j, k, l);
      s -= gamma[m](a, j) * R(i, m, k, l);
      s -= gamma[m](a, k) * R(i, j, m, l);
      s -= gamma[m](a, l) * R(i, j, k, m);
    }
    return s;
  };

  Bianchi2 out;
  // Fields with covariantly constant curvature have nabla R = 0; floor the
  // comparison scale with |R| so the relative residual stays meaningful.
  out.scale = R.max_abs();
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            const double na = nabla(a, i, j, k, l);
            out.scale = std::max(out.scale, std::fabs(na));
            const double cyc = na + nabla(i, j, a, k, l) + nabla(j, a, i, k, l);
            out.residual = std::max(out.residual, std::fabs(cyc));
          }
  return out;
}

}  // namespace kqch
