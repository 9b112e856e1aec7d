#pragma once

#include "kqch/invariants.hpp"
#include "kqch/metric_field.hpp"
#include "kqch/ode.hpp"
#include "kqch/quadrature.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace kqch {

// Meridian data of a rotational hypersurface: t(s) is the parallel radius
// as a function of meridian arc length, with derivatives up to third
// order.  Admissible profiles have t > 0 and 0 < t' <= 1 (the axial
// component of the meridian tangent satisfies q'^2 + t'^2 = 1).
struct RotationalProfile {
  std::function<double(double)> t, t1, t2, t3;
  double s_min = 0.0, s_max = 1.0;
};

RotationalProfile profile_sin(double s_min = 0.35, double s_max = 1.45);
// Slowly saturating ramp t = 1 + log(cosh s)/2.
RotationalProfile profile_ramp(double s_min = 0.5, double s_max = 2.0);
// Profile of the constant-holomorphic-curvature hypersurface,
// t = (2/sqrt(a)) tanh(sqrt(a) s / 2).
RotationalProfile profile_const_curvature(double a, double s_min = 0.5, double s_max = 2.0);
// Hyperplane case t = s0 + s, flat everywhere.
RotationalProfile profile_linear(double s0, double s_min = 0.2, double s_max = 2.0);
// t = t0 + sin s around s = 0; touches t' = 1 at an interior point.
RotationalProfile profile_tangent_flat(double t0 = 2.0, double half_span = 0.5);

// Throws std::domain_error when the profile violates admissibility on its
// parameter interval.
void require_admissible(const RotationalProfile& profile, int samples = 128);

// Radial chart r = exp(int ds / t): the hypersurface complex structure
// becomes the standard one and all metrics reuse the flat-chart engine.
class RadialChart {
 public:
  explicit RadialChart(const RotationalProfile& profile);
  double rho(double s) const;      // chart radius of the parallel at s
  double s_of_r(double r) const;
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }

 private:
  RotationalProfile profile_;
  std::shared_ptr<CumulativeIntegral> log_rho_;
  double s_ref_ = 0.0;
  double r_min_ = 0.0, r_max_ = 0.0;
};

// Induced metric of the hypersurface pulled back to the radial chart,
// (t/r)^2 times the flat metric.  Hermitian, in general not Kahler.
MetricField rotational_induced_metric(const RotationalProfile& profile, int n);

// The Kahler metric obtained by scaling the structural plane of the
// induced metric by t': g = g_bar + (t'-1)(eta x eta + eta~ x eta~).
MetricField rotational_metric(const RotationalProfile& profile, int n);

// Closed-form coefficients of the curvature decomposition of the
// rotational Kahler metric, from t and its first three derivatives.
QchCoefficients rotational_coefficients(const RotationalProfile& profile, double s);

// Coefficients (pi-part, Phi-part) of the warped-product curvature of the
// induced metric.
std::pair<double, double> warped_curvature_coefficients(const RotationalProfile& profile,
                                                        double s);

// Full (0,4) warped-product curvature at a chart point, for comparison
// against the numeric curvature of the induced metric.
Tensor4 warped_curvature_tensor(const RotationalProfile& profile, const RadialChart& chart,
                                const Vec& p, int n);

// Max-norm residual of the closed form for nabla J of the induced metric
// at the parallel through s.
double nabla_j_residual(const RotationalProfile& profile, int n, double s);

// Same residual evaluated against a deliberately wrong complex structure;
// stays far from zero unless t' = 1.
double nabla_j_residual_mismatched(const RotationalProfile& profile, int n, double s);

// Meridian curve of the constant-curvature hypersurface in the plane
// (x = parallel radius, y = axis), sampled on (0, 2/sqrt(a)) with a small
// margin; the + branch with y(first sample fixed by the closed form).
std::vector<std::pair<double, double>> constant_curvature_meridian(double a, int samples);

// Closed-form meridian height at abscissa x.
double constant_curvature_meridian_y(double a, double x);

// Worst residual of the flat-b equation t'' = 2 t'(t'-1)/t along the
// closed-form meridian, with t', t'' recovered by differencing the curve
// on the interior of its domain.
double meridian_b_residual(double a, int samples);

// Integrates t'' = 2 t'(t'-1)/t with t(0) = t0, t'(0) = 1 - a t0^2/4,
// producing the profile of the constant-curvature hypersurface on
// [s_back, s_fwd] around 0.  Throws std::domain_error (with the exit
// point) if t' leaves (0, 1].
RotationalProfile solve_b_zero_ode(double a_target, double t0, double s_back, double s_fwd,
                                   double tol = 1e-10);

}  // namespace kqch
