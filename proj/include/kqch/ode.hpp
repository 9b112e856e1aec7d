#pragma once

#include <functional>
#include <vector>

namespace kqch {

// Adaptive Dormand-Prince 4(5) integrator for small systems, with dense
// output stored per accepted step (quintic Hermite from the state and its
// first two derivatives at the step ends).
class OdeSolution {
 public:
  struct Node {
    double s;
    std::vector<double> y;     // state
    std::vector<double> dy;    // state derivative from the right side
  };

  double s_begin() const { return nodes_.front().s; }
  double s_end() const { return nodes_.back().s; }

  // Interpolated state component i at s.
  double eval(double s, int i) const;
  // Interpolated derivative of component i (from the stored slopes).
  double eval_derivative(double s, int i) const;

  friend OdeSolution solve_ivp(const std::function<void(double, const std::vector<double>&,
                                                        std::vector<double>&)>& rhs,
                               double s0, double s1, std::vector<double> y0, double tol,
                               const std::function<bool(double, const std::vector<double>&)>&
                                   admissible);

 private:
  std::vector<Node> nodes_;  // ascending in s
};

// Integrates y' = rhs(s, y) from s0 to s1 (either direction).  When
// `admissible` is given and returns false, integration stops with
// std::domain_error naming the exit point.
OdeSolution solve_ivp(
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& rhs,
    double s0, double s1, std::vector<double> y0, double tol = 1e-10,
    const std::function<bool(double, const std::vector<double>&)>& admissible = nullptr);

}  // namespace kqch
