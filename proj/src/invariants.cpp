#include "kqch/invariants.hpp"

#include <cmath>
#include <stdexcept>

namespace kqch {

Tensor4 invariant_tensor(InvariantKind kind, const StructureData& s) {
  const int d = static_cast<int>(s.g.rows());
  const Mat& g = s.g;
  const Mat Jg = s.J.transpose() * g;  // Jg(a,b) = g(J e_a, e_b)
  const Vec& e = s.eta;
  const Vec& t = s.eta_tilde;

  Tensor4 T(d);
  switch (kind) {
    case InvariantKind::Pi:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
              T(i, j, k, l) = 0.25 * (g(j, k) * g(i, l) - g(i, k) * g(j, l)
                                      + Jg(j, k) * Jg(i, l) - Jg(i, k) * Jg(j, l)
                                      - 2.0 * Jg(i, j) * Jg(k, l));
      break;
    case InvariantKind::Phi: {
      Mat S(d, d), A(d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          S(a, b) = e[a] * e[b] + t[a] * t[b];
          A(a, b) = e[a] * t[b] - e[b] * t[a];
        }
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
              T(i, j, k, l) = 0.125 * (g(j, k) * S(i, l) - g(i, k) * S(j, l)
                                       + g(i, l) * S(j, k) - g(j, l) * S(i, k)
                                       + Jg(j, k) * A(i, l) - Jg(i, k) * A(j, l)
                                       + Jg(i, l) * A(j, k) - Jg(j, l) * A(i, k)
                                       - 2.0 * Jg(i, j) * A(k, l) - 2.0 * Jg(k, l) * A(i, j));
      break;
    }
    case InvariantKind::Psi:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
              T(i, j, k, l) = e[j] * e[k] * t[i] * t[l] - e[i] * e[k] * t[j] * t[l]
                              + e[i] * e[l] * t[j] * t[k] - e[j] * e[l] * t[i] * t[k];
      break;
  }
  return T;
}

Tensor4 invariant_tensor(InvariantKind kind, const AdaptedFrame& frame) {
  return invariant_tensor(kind, orthonormal_structure(frame.n()));
}

Tensor4 qch_tensor(double a, double b, double c, const StructureData& s) {
  Tensor4 T = invariant_tensor(InvariantKind::Pi, s);
  T *= a;
  Tensor4 P = invariant_tensor(InvariantKind::Phi, s);
  P *= b;
  Tensor4 Q = invariant_tensor(InvariantKind::Psi, s);
  Q *= c;
  T += P;
  T += Q;
  return T;
}

QchCoefficients qch_decompose(const Tensor4& R, int n) {
  if (n < 2) throw std::invalid_argument("qch_decompose: no horizontal section for n < 2");
  QchCoefficients q;
  // Horizontal holomorphic, mixed and vertical sectional curvatures of the
  // adapted frame determine the three coefficients.
  q.a = R(2, 3, 3, 2);
  const double mixed = R(2, 0, 0, 2);
  q.b = 8.0 * mixed - 2.0 * q.a;
  q.c = R(0, 1, 1, 0) - q.a - q.b;

  const StructureData s = orthonormal_structure(n);
  Tensor4 rec = qch_tensor(q.a, q.b, q.c, s);
  rec -= R;
  q.residual = rec.max_abs();
  return q;
}

double hol_profile(const QchCoefficients& coeffs, double phi) {
  const double c2 = std::cos(phi) * std::cos(phi);
  return coeffs.a + coeffs.b * c2 + coeffs.c * c2 * c2;
}

QchCoefficients coefficients_from_scalars(double tau, double sigma, double kappa, int n) {
  if (n < 2) throw std::invalid_argument("coefficients_from_scalars: n must be >= 2");
  const double nn = static_cast<double>(n) * (n - 1);
  QchCoefficients q;
  q.a = (tau - 4.0 * sigma + 2.0 * kappa) / nn;
  q.b = (4.0 * (n + 2) * sigma - 2.0 * tau - 4.0 * (n + 1) * kappa) / nn;
  q.c = (tau - 4.0 * (n + 1) * sigma + (n + 1.0) * (n + 2.0) * kappa) / nn;
  return q;
}

double ricci_identity_residual(const Tensor4& R, int n) {
  const int d = 2 * n;
  Mat rho = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double acc = 0.0;
      for (int i = 0; i < d; ++i) acc += R(i, j, k, i);
      rho(j, k) = acc;
    }
  const double tau = rho.trace();
  const double sigma = rho(0, 0);
  Mat model = (tau - 2.0 * sigma) / (2.0 * (n - 1)) * Mat::Identity(d, d);
  model(0, 0) += (2.0 * n * sigma - tau) / (2.0 * (n - 1));
  model(1, 1) += (2.0 * n * sigma - tau) / (2.0 * (n - 1));
  return (rho - model).cwiseAbs().maxCoeff();
}

Tensor4 qc_tensor(const Tensor4& R, int n) {
  const QchCoefficients q = qch_decompose(R, n);
  const StructureData s = orthonormal_structure(n);
  Tensor4 qc = R;
  qc -= qch_tensor(q.a, q.b, q.c, s);
  // The frame is g-orthonormal, so raising the last index is the identity.
  return qc;
}

Tensor4 qc_tensor_with(const Tensor4& R04, const QchCoefficients& coeffs,
                       const StructureData& s) {
  Tensor4 qc = R04;
  qc -= qch_tensor(coeffs.a, coeffs.b, coeffs.c, s);
  return qc.contract_last(s.g.inverse());
}

}  // namespace kqch
