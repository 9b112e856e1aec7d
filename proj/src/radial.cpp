#include "kqch/radial.hpp"

#include <cmath>
#include <stdexcept>

namespace kqch {

namespace {

double fd_of(const std::function<double(double)>& f, double x) {
  const double h = 1e-5 * std::max(1.0, std::fabs(x));
  return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h);
}

}  // namespace

double RadialScalar::eval_d1(double rho) const {
  return d1 ? d1(rho) : fd_of(value, rho);
}
double RadialScalar::eval_d2(double rho) const {
  if (d2) return d2(rho);
  if (d1) return fd_of(d1, rho);
  throw std::runtime_error("RadialScalar: second derivative unavailable");
}
double RadialScalar::eval_d3(double rho) const {
  if (d3) return d3(rho);
  if (d2) return fd_of(d2, rho);
  throw std::runtime_error("RadialScalar: third derivative unavailable");
}

RadialScalar radial_constant(double c) {
  RadialScalar f;
  f.value = [c](double) { return c; };
  f.d1 = [](double) { return 0.0; };
  f.d2 = f.d1;
  f.d3 = f.d1;
  return f;
}

RadialScalar radial_poly(const std::vector<double>& coeffs) {
  auto horner = [](const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  auto derive = [](const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(k * c[k]);
    if (d.empty()) d.push_back(0.0);
    return d;
  };
  const std::vector<double> c1 = derive(coeffs), c2 = derive(c1), c3 = derive(c2);
  RadialScalar f;
  f.value = [coeffs, horner](double x) { return horner(coeffs, x); };
  f.d1 = [c1, horner](double x) { return horner(c1, x); };
  f.d2 = [c2, horner](double x) { return horner(c2, x); };
  f.d3 = [c3, horner](double x) { return horner(c3, x); };
  return f;
}

RadialScalar radial_log1p() {
  RadialScalar f;
  f.value = [](double x) { return std::log1p(x); };
  f.d1 = [](double x) { return 1.0 / (1.0 + x); };
  f.d2 = [](double x) { return -1.0 / ((1.0 + x) * (1.0 + x)); };
  f.d3 = [](double x) { return 2.0 / ((1.0 + x) * (1.0 + x) * (1.0 + x)); };
  return f;
}

RadialScalar radial_flat_potential() { return radial_poly({0.0, 0.5}); }

RadialScalar radial_sum(const RadialScalar& a, const RadialScalar& b) {
  RadialScalar f;
  f.value = [a, b](double x) { return a.value(x) + b.value(x); };
  f.d1 = [a, b](double x) { return a.eval_d1(x) + b.eval_d1(x); };
  f.d2 = [a, b](double x) { return a.eval_d2(x) + b.eval_d2(x); };
  f.d3 = [a, b](double x) { return a.eval_d3(x) + b.eval_d3(x); };
  return f;
}

RadialScalar radial_scale(const RadialScalar& a, double s) {
  RadialScalar f;
  f.value = [a, s](double x) { return s * a.value(x); };
  f.d1 = [a, s](double x) { return s * a.eval_d1(x); };
  f.d2 = [a, s](double x) { return s * a.eval_d2(x); };
  f.d3 = [a, s](double x) { return s * a.eval_d3(x); };
  return f;
}

double radial_derivative_consistency(const RadialScalar& f, double rho0, double rho1,
                                     int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double rho = rho0 + (rho1 - rho0) * (i + 0.5) / samples;
    const double fd = fd_of(f.value, rho);
    const double an = f.eval_d1(rho);
    worst = std::max(worst, std::fabs(fd - an) / std::max(1.0, std::fabs(an)));
  }
  return worst;
}

}  // namespace kqch
