#include "kqch/tangent_space.hpp"

#include <cmath>
#include <stdexcept>

namespace kqch {

void TangentSpace::validate(double tol) const {
  const int d = dim();
  if (n < 2) throw std::invalid_argument("TangentSpace: complex dimension must be >= 2");
  if (J.rows() != d || J.cols() != d || g.rows() != d || g.cols() != d)
    throw std::invalid_argument("TangentSpace: dimension mismatch");
  if ((J * J + Mat::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("TangentSpace: J*J != -Id");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > tol * g.cwiseAbs().maxCoeff())
    throw std::invalid_argument("TangentSpace: metric not symmetric");
  if ((J.transpose() * g * J - g).cwiseAbs().maxCoeff() > tol * g.cwiseAbs().maxCoeff())
    throw std::invalid_argument("TangentSpace: metric not Hermitian-compatible");
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("TangentSpace: metric not positive definite");
}

TangentSpace make_tangent_space(int n, const Mat& g) {
  TangentSpace s;
  s.n = n;
  s.J = standard_complex_structure(n);
  s.g = g;
  s.validate();
  return s;
}

double AdaptedFrame::residual() const {
  const int d = dim();
  const Mat gram = vectors.transpose() * space.g * vectors;
  double r = (gram - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  for (int k = 0; k < d; k += 2) {
    r = std::max(r, (space.J * vectors.col(k) - vectors.col(k + 1)).cwiseAbs().maxCoeff());
  }
  r = std::max(r, (eta - space.g * vectors.col(0)).cwiseAbs().maxCoeff());
  r = std::max(r, (eta_tilde - space.g * vectors.col(1)).cwiseAbs().maxCoeff());
  return r;
}

AdaptedFrame adapted_frame(const TangentSpace& space, const Vec& xi, double skip_tol) {
  space.validate();
  const int d = space.dim();
  const Mat& g = space.g;

  const double xi_norm = std::sqrt(xi.dot(g * xi));
  if (!(xi_norm >= 1e-12)) throw std::invalid_argument("adapted_frame: xi has vanishing norm");

  Mat V(d, d);
  int count = 0;
  auto push = [&](const Vec& v) {
    V.col(count++) = v;
  };
  auto project_out = [&](Vec v) {
    for (int c = 0; c < count; ++c) v -= V.col(c).dot(g * v) * V.col(c);
    return v;
  };

  push(xi / xi_norm);
  push(space.J * V.col(0));

  for (int cand = 0; cand < d && count < d; ++cand) {
    Vec w = project_out(Vec::Unit(d, cand));
    double wn = std::sqrt(w.dot(g * w));
    if (wn < skip_tol) continue;
    w /= wn;
    push(w);
    Vec jw = project_out(space.J * w);  // cleanup pass; exact up to roundoff
    jw /= std::sqrt(jw.dot(g * jw));
    push(jw);
  }
  if (count != d) throw std::runtime_error("adapted_frame: failed to complete a basis");

  AdaptedFrame f;
  f.space = space;
  f.vectors = V;
  f.eta = g * V.col(0);
  f.eta_tilde = g * V.col(1);
  return f;
}

StructureData orthonormal_structure(int n) {
  StructureData s;
  const int d = 2 * n;
  s.g = Mat::Identity(d, d);
  s.J = standard_complex_structure(n);
  s.eta = Vec::Unit(d, 0);
  s.eta_tilde = Vec::Unit(d, 1);
  return s;
}

double kahler_symmetry_residual(const Tensor4& T, const Mat& J) {
  const int d = T.dim();
  double r = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          r = std::max(r, std::fabs(T(i, j, k, l) + T(j, i, k, l)));
          r = std::max(r, std::fabs(T(i, j, k, l) + T(i, j, l, k)));
          r = std::max(r, std::fabs(T(i, j, k, l) + T(j, k, i, l) + T(k, i, j, l)));
          double jr = 0.0;
          for (int m = 0; m < d; ++m)
            jr += T(i, j, m, l) * J(m, k) + T(i, j, k, m) * J(m, l);
          r = std::max(r, std::fabs(jr));
        }
  return r;
}

double kahler_symmetry_residual(const Tensor4& T) {
  return kahler_symmetry_residual(T, standard_complex_structure(T.dim() / 2));
}

CurvatureScalars curvature_scalars(const Tensor4& R, int n) {
  const int d = 2 * n;
  CurvatureScalars s;
  Mat rho = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double acc = 0.0;
      for (int i = 0; i < d; ++i) acc += R(i, j, k, i);
      rho(j, k) = acc;
    }
  s.tau = rho.trace();
  s.sigma = rho(0, 0);
  s.kappa = R(0, 1, 1, 0);
  s.horizontal = s.tau - 4.0 * s.sigma + 2.0 * s.kappa;
  s.mixed = s.sigma - s.kappa;
  s.vertical = s.kappa;
  return s;
}

double angle_phi(const Vec& x, const AdaptedFrame& frame, double unit_tol) {
  const double norm = std::sqrt(x.dot(frame.space.g * x));
  if (std::fabs(norm - 1.0) > unit_tol)
    throw std::invalid_argument("angle_phi: vector is not g-unit");
  const double e = frame.eta.dot(x);
  const double et = frame.eta_tilde.dot(x);
  double c = std::sqrt(e * e + et * et);
  c = std::min(1.0, std::max(0.0, c));
  return std::acos(c);
}

}  // namespace kqch
