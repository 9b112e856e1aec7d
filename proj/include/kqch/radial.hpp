#pragma once

#include <functional>
#include <vector>

namespace kqch {

// Smooth radial profile given as a function of rho = r^2 with analytic
// derivatives up to third order.  Transform data (potential functions,
// conformal exponents) is carried in this form.
struct RadialScalar {
  std::function<double(double)> value;  // of rho
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  std::function<double(double)> d3;

  double at_r(double r) const { return value(r * r); }
  // d/dr at radius r.
  double dr_at(double r) const { return 2.0 * r * d1(r * r); }

  // Derivatives fall back to central differences of the previous order
  // when a provider is missing.
  double eval_d1(double rho) const;
  double eval_d2(double rho) const;
  double eval_d3(double rho) const;
};

RadialScalar radial_constant(double c);
// Polynomial in rho with the given coefficients (constant term first).
RadialScalar radial_poly(const std::vector<double>& coeffs);
// log(1 + rho); the constant-holomorphic-curvature potential.
RadialScalar radial_log1p();
// rho / 2; the flat potential.
RadialScalar radial_flat_potential();

RadialScalar radial_sum(const RadialScalar& a, const RadialScalar& b);
RadialScalar radial_scale(const RadialScalar& a, double s);

// Verification helper: worst relative disagreement between d1 and central
// differences of value over sampled rho in [rho0, rho1].
double radial_derivative_consistency(const RadialScalar& f, double rho0, double rho1,
                                     int samples = 32);

}  // namespace kqch
