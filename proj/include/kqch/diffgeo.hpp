#pragma once

#include "kqch/metric_field.hpp"
#include "kqch/tensor4.hpp"

#include <vector>

namespace kqch {

// Christoffel symbols: gamma[k](i,j) = Gamma^k_{ij}.
using Christoffel = std::vector<Mat>;

// First derivatives of the metric, analytic when the field provides them,
// otherwise 4th-order central differences with step eps^{1/5} scaled by the
// coordinate magnitude.
std::vector<Mat> metric_d1(const MetricField& field, const Vec& p);

// Throws std::domain_error when p is closer to the domain boundary than the
// differencing stencil needs.
void require_stencil_margin(const MetricField& field, const Vec& p, int order);

Christoffel christoffel(const MetricField& field, const Vec& p);

// Relative residual of metric compatibility, d_k g_ij = Gamma.g + g.Gamma.
double metric_compatibility_residual(const MetricField& field, const Vec& p);

// (0,4) curvature in chart coordinates, R(X,Y,Z,U) = g(R(X,Y)Z, U) with
// R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
Tensor4 riemann_coord(const MetricField& field, const Vec& p);

// Same curvature projected onto an adapted frame.
Tensor4 riemann(const MetricField& field, const Vec& p, const AdaptedFrame& frame);
Tensor4 riemann(const MetricField& field, const DistributionField& dist, const Vec& p);

// Covariant derivative data of the structural forms at a point, in
// adapted-frame components, with the derived scalars of the distribution
// geometry.
struct NablaEta {
  Mat nabla_eta;        // (a,b) -> (nabla_{v_a} eta)(v_b) = g(nabla_{v_a} xi, v_b)
  Mat nabla_eta_tilde;
  double div0_xi = 0.0;   // trace over D of nabla eta
  double div0_Jxi = 0.0;  // trace over D of nabla eta~
  double k = 0.0;         // div0_xi / (n-1)
  double p = 0.0;         // g(nabla_xi xi, J xi)
  double p_star = 0.0;    // g(nabla_{J xi} J xi, xi)
  Vec theta;              // theta(v_a) on D; entries 0,1 are zero
  Vec theta_star;
};

NablaEta nabla_eta(const MetricField& field, const DistributionField& dist, const Vec& p);

struct Involutivity {
  bool D = false, Dperp = false, Delta = false;
  double res_D = 0.0, res_Dperp = 0.0, res_Delta = 0.0;
};

// Involutivity of D (both structural forms closed along D), of the
// structural plane, and of the hyperplane distribution orthogonal to xi.
Involutivity involutivity(const MetricField& field, const DistributionField& dist,
                          const Vec& p, double tol = 1e-6);

// Lee form of a Hermitian (possibly non-Kahler) structure, recovered by
// contracting dOmega against an orthonormal frame.  Returns the coordinate
// covector.
Vec lee_form(const MetricField& field, const Vec& p);

// Max-norm of dOmega; zero iff the structure is Kahler at p.
double kahler_residual(const MetricField& field, const Vec& p);

// Max-norm of dOmega - omega ^ Omega, the locally-conformal-Kahler defect.
double w4_residual(const MetricField& field, const Vec& p);

// Frame with the structural pair rotated so that div0 of the second vector
// vanishes and div0 of the first is nonnegative.  Throws std::domain_error
// when both relative divergences vanish.
AdaptedFrame principal_frame(const MetricField& field, const DistributionField& dist,
                             const Vec& p);

// 5-point directional derivative of a scalar observable along `dir`.
double directional_derivative(const std::function<double(const Vec&)>& f, const Vec& p,
                              const Vec& dir, double h);

// Max-norm of the cyclic sum in the second Bianchi identity, and the scale
// of nabla R it should be compared with.
struct Bianchi2 {
  double residual = 0.0;
  double scale = 0.0;
};
Bianchi2 second_bianchi_residual(const MetricField& field, const Vec& p);

}  // namespace kqch
