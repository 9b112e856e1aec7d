#pragma once

#include "kqch/metric_field.hpp"
#include "kqch/quadrature.hpp"
#include "kqch/radial.hpp"

#include <functional>

namespace kqch {

// Standard flat metric on an annulus around the origin, with exact zero
// derivative providers.  The canonical structural field on it is radial.
MetricField flat_metric(int n, double r0 = 0.2, double r1 = 5.0);

// Kahler metric generated by a radial potential f(r^2): Hermitian
// components f' delta + f'' z~ z, realized as a real field with analytic
// first derivatives.  Requires f' > 0 and f' + rho f'' > 0 on the domain;
// violations raise std::domain_error naming the radius.
MetricField potential_metric(const RadialScalar& f, int n, double r1 = 5.0);

// Transformation data: exponents u, v with 2 du = k (e^{2v} - 1) eta, where
// eta = weight(r) dr in the radial chart of the source structure.
struct BiconformalPair {
  RadialScalar u;
  RadialScalar v;
  std::function<double(double)> k_at;        // r -> k of the source structure
  std::function<double(double)> eta_weight;  // r -> |d/dr|_g; 1 for the flat example
  double r0 = 0.2;
  double r1 = 5.0;
};

// |2 u'(r) - k (e^{2v} - 1) weight| at radius r.
double pair_constraint_residual(const BiconformalPair& pair, double r);

// Integrates u from v so that the pair constraint holds, u(r0) = 0 (the
// transformed metric is determined up to homothety).  The derivative
// provider is the integrand itself.
RadialScalar u_from_v(const RadialScalar& v, const std::function<double(double)>& k_at,
                      double r0, double r1,
                      const std::function<double(double)>& eta_weight = nullptr,
                      double quad_tol = 1e-10);

BiconformalPair make_biconformal_pair(const RadialScalar& v,
                                      const std::function<double(double)>& k_at,
                                      double r0, double r1,
                                      const std::function<double(double)>& eta_weight = nullptr,
                                      double quad_tol = 1e-10);

// The group composition: exponents add; constraint data stays with the
// first factor's source structure.
BiconformalPair composed_pair(const BiconformalPair& p1, const BiconformalPair& p2);

// Pair acting on the image of p1: k and eta pick up e^{v-u} and e^{u+v}.
BiconformalPair second_stage_pair(const BiconformalPair& p1, const RadialScalar& v2,
                                  double quad_tol = 1e-10);

// g' = e^{2u} { g + (e^{2v} - 1)(eta x eta + eta~ x eta~) }.  The result is
// Kahler whenever the source structure is a B-distribution and the pair
// constraint holds; the constraint is validated on sampled radii.
// Restricted to the radial setting.
MetricField biconformal_apply(const MetricField& src, const DistributionField& dist,
                              const BiconformalPair& pair);

// g* = g + (q - 1)(eta x eta + eta~ x eta~), q > 0; Hermitian and in
// general not Kahler.
MetricField dilatational_apply(const MetricField& src, const DistributionField& dist,
                               const RadialScalar& q);

// Kahler metric built from the flat structure by the inverse transform with
// exponent v(r^2): g = e^{-2u} { flat + (e^{-2v} - 1) radial projector },
// d(-u)/drho = (e^{-2v} - 1)/(2 rho), u(rho0) = 0.
MetricField biconformally_flat_normal_form(const RadialScalar& v, int n, double r0 = 0.2,
                                           double r1 = 5.0, double quad_tol = 1e-10);

// r -> sqrt(g(r_hat, r_hat)) on the first coordinate ray; the ds/dr factor
// of radially symmetric fields.
std::function<double(double)> radial_arc_weight(const MetricField& field);

}  // namespace kqch
