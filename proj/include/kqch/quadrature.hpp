#pragma once

#include <functional>
#include <vector>

namespace kqch {

// Adaptive Simpson integration with absolute tolerance.  Throws
// std::runtime_error when the recursion depth cap is reached without
// convergence.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 30);

// Antiderivative F(x) = int_a^x f with F(a) = 0, backed by a cumulative
// table of adaptive panel integrals plus a short in-panel rule.  Evaluation
// is smooth inside panels, which matters when F feeds finite differencing.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<double(double)> f, double a, double b,
                     double tol = 1e-10, int panels = 256);

  double operator()(double x) const;
  double lower() const { return a_; }
  double upper() const { return b_; }

 private:
  std::function<double(double)> f_;
  double a_ = 0.0, b_ = 1.0, tol_ = 1e-10;
  std::vector<double> nodes_;
  std::vector<double> cum_;
};

// Chebyshev interpolant of a smooth function on [a, b]; supplies spectrally
// accurate values and derivatives, used to smooth numerically sampled
// radial profiles before they feed curvature formulas.
class ChebyshevFit {
 public:
  ChebyshevFit() = default;
  ChebyshevFit(const std::function<double(double)>& f, double a, double b, int degree);
  // Interpolant through values sampled at nodes(a, b, degree).
  ChebyshevFit(const std::vector<double>& values, double a, double b);

  // The interpolation nodes, in the order the constructors expect.
  static std::vector<double> nodes(double a, double b, int degree);

  double operator()(double x) const;
  ChebyshevFit derivative() const;
  double lower() const { return a_; }
  double upper() const { return b_; }

 private:
  double a_ = -1.0, b_ = 1.0;
  std::vector<double> coef_;  // Chebyshev-T coefficients
};

}  // namespace kqch
