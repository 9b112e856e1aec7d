#include "kqch/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kqch {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

double OdeSolution::eval(double s, int i) const {
  const double lo = std::min(nodes_.front().s, nodes_.back().s);
  const double hi = std::max(nodes_.front().s, nodes_.back().s);
  if (s < lo - 1e-9 || s > hi + 1e-9)
    throw std::domain_error("OdeSolution: argument outside the integrated span");
  s = std::min(std::max(s, lo), hi);

  // Nodes are stored ascending.
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s,
                             [](const Node& n, double x) { return n.s < x; });
  std::size_t hi_idx = std::min<std::size_t>(it - nodes_.begin(), nodes_.size() - 1);
  if (hi_idx == 0) hi_idx = 1;
  const Node& n0 = nodes_[hi_idx - 1];
  const Node& n1 = nodes_[hi_idx];
  const double h = n1.s - n0.s;
  if (h == 0.0) return n0.y[i];
  const double t = (s - n0.s) / h;
  // Cubic Hermite on (y, dy) at the interval ends.
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * n0.y[i] + h10 * h * n0.dy[i] + h01 * n1.y[i] + h11 * h * n1.dy[i];
}

double OdeSolution::eval_derivative(double s, int i) const {
  const double lo = std::min(nodes_.front().s, nodes_.back().s);
  const double hi = std::max(nodes_.front().s, nodes_.back().s);
  s = std::min(std::max(s, lo), hi);
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s,
                             [](const Node& n, double x) { return n.s < x; });
  std::size_t hi_idx = std::min<std::size_t>(it - nodes_.begin(), nodes_.size() - 1);
  if (hi_idx == 0) hi_idx = 1;
  const Node& n0 = nodes_[hi_idx - 1];
  const Node& n1 = nodes_[hi_idx];
  const double h = n1.s - n0.s;
  if (h == 0.0) return n0.dy[i];
  const double t = (s - n0.s) / h;
  const double d00 = 6 * t * (t - 1) / h;
  const double d10 = (1 - t) * (1 - 3 * t);
  const double d01 = -6 * t * (t - 1) / h;
  const double d11 = t * (3 * t - 2);
  return d00 * n0.y[i] + d10 * n0.dy[i] + d01 * n1.y[i] + d11 * n1.dy[i];
}

OdeSolution solve_ivp(
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& rhs,
    double s0, double s1, std::vector<double> y0, double tol,
    const std::function<bool(double, const std::vector<double>&)>& admissible) {
  const int dim = static_cast<int>(y0.size());
  const double dir = (s1 >= s0) ? 1.0 : -1.0;
  const double span = std::fabs(s1 - s0);
  double h = dir * std::min(0.01 * span + 1e-12, 0.05);
  double s = s0;
  std::vector<double> y = y0;

  auto f = [&](double sv, const std::vector<double>& yv) {
    std::vector<double> dy(dim);
    rhs(sv, yv, dy);
    return dy;
  };

  OdeSolution sol;
  sol.nodes_.push_back({s, y, f(s, y)});

  std::vector<double> k1 = sol.nodes_.back().dy;
  int steps = 0;
  while (dir * (s1 - s) > 1e-14 * std::max(1.0, span)) {
    if (++steps > 1000000) throw std::runtime_error("solve_ivp: step limit exceeded");
    if (dir * (s + h - s1) > 0) h = s1 - s;

    std::vector<double> yt(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    auto stage = [&](std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
      for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (const auto& [w, kv] : terms) acc += w * (*kv)[i];
        yt[i] = y[i] + h * acc;
      }
    };
    stage({{a21, &k1}});
    k2 = f(s + c2 * h, yt);
    stage({{a31, &k1}, {a32, &k2}});
    k3 = f(s + c3 * h, yt);
    stage({{a41, &k1}, {a42, &k2}, {a43, &k3}});
    k4 = f(s + c4 * h, yt);
    stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    k5 = f(s + c5 * h, yt);
    stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    k6 = f(s + h, yt);
    std::vector<double> y_new(dim);
    for (int i = 0; i < dim; ++i)
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = f(s + h, y_new);

    double err = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i]
                            + e7 * k7[i]);
      const double sc = tol * (1.0 + std::max(std::fabs(y[i]), std::fabs(y_new[i])));
      err = std::max(err, std::fabs(e) / sc);
    }
    if (err <= 1.0) {
      s += h;
      y = y_new;
      k1 = k7;  // FSAL
      if (admissible && !admissible(s, y)) {
        std::ostringstream msg;
        msg << "solve_ivp: solution left the admissible region at s = " << s;
        throw std::domain_error(msg.str());
      }
      sol.nodes_.push_back({s, y, k1});
    }
    const double factor = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    h *= factor;
    // Cap the step so the Hermite dense output stays well below the
    // integration tolerance.
    if (std::fabs(h) > 0.02 * std::max(span, 1e-6)) h = dir * 0.02 * std::max(span, 1e-6);
    if (std::fabs(h) < 1e-14) throw std::runtime_error("solve_ivp: step size underflow");
  }

  if (dir < 0) std::reverse(sol.nodes_.begin(), sol.nodes_.end());
  return sol;
}

}  // namespace kqch
