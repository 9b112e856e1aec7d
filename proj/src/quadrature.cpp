#include "kqch/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kqch {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double fm, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw std::runtime_error("adaptive_simpson: did not converge");
  return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
         + adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive_step(f, a, fa, b, fb, fm, whole, tol, max_depth);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double a, double b,
                                       double tol, int panels)
    : f_(std::move(f)), a_(a), b_(b), tol_(tol) {
  if (!(b > a)) throw std::invalid_argument("CumulativeIntegral: empty interval");
  nodes_.resize(panels + 1);
  cum_.resize(panels + 1);
  const double h = (b - a) / panels;
  cum_[0] = 0.0;
  nodes_[0] = a;
  for (int i = 0; i < panels; ++i) {
    nodes_[i + 1] = (i + 1 == panels) ? b : a + h * (i + 1);
    cum_[i + 1] = cum_[i] + adaptive_simpson(f_, nodes_[i], nodes_[i + 1], tol / panels, 30);
  }
}

double CumulativeIntegral::operator()(double x) const {
  if (x < a_ - 1e-12 || x > b_ + 1e-12)
    throw std::domain_error("CumulativeIntegral: argument outside range");
  x = std::min(std::max(x, a_), b_);
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  int i = static_cast<int>(it - nodes_.begin()) - 1;
  i = std::min(std::max(i, 0), static_cast<int>(nodes_.size()) - 2);
  return cum_[i] + adaptive_simpson(f_, nodes_[i], x, tol_ / nodes_.size(), 30);
}

std::vector<double> ChebyshevFit::nodes(double a, double b, int degree) {
  const int m = degree + 1;
  std::vector<double> x(m);
  for (int j = 0; j < m; ++j) {
    const double theta = std::numbers::pi * (j + 0.5) / m;
    x[j] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
  }
  return x;
}

ChebyshevFit::ChebyshevFit(const std::vector<double>& values, double a, double b)
    : a_(a), b_(b), coef_(values.size(), 0.0) {
  const int m = static_cast<int>(values.size());
  if (m == 0) throw std::invalid_argument("ChebyshevFit: no sample values");
  for (int k = 0; k < m; ++k) {
    double s = 0.0;
    for (int j = 0; j < m; ++j)
      s += values[j] * std::cos(std::numbers::pi * k * (j + 0.5) / m);
    coef_[k] = 2.0 * s / m;
  }
  coef_[0] *= 0.5;
}

ChebyshevFit::ChebyshevFit(const std::function<double(double)>& f, double a, double b,
                           int degree) {
  const std::vector<double> x = nodes(a, b, degree);
  std::vector<double> fx(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) fx[j] = f(x[j]);
  *this = ChebyshevFit(fx, a, b);
}

double ChebyshevFit::operator()(double x) const {
  const double t = (2.0 * x - a_ - b_) / (b_ - a_);
  // Clenshaw recurrence.
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(coef_.size()) - 1; k >= 1; --k) {
    const double tmp = 2.0 * t * b1 - b2 + coef_[k];
    b2 = b1;
    b1 = tmp;
  }
  return t * b1 - b2 + coef_[0];
}

ChebyshevFit ChebyshevFit::derivative() const {
  const int m = static_cast<int>(coef_.size());
  ChebyshevFit d;
  d.a_ = a_;
  d.b_ = b_;
  d.coef_.assign(std::max(m - 1, 1), 0.0);
  if (m >= 2) {
    std::vector<double> c(coef_);
    c[0] *= 2.0;  // undo the halved constant for the recurrence
    std::vector<double> dc(m + 1, 0.0);
    for (int k = m - 1; k >= 1; --k) dc[k - 1] = dc[k + 1] + 2.0 * k * c[k];
    dc[0] *= 0.5;
    const double scale = 2.0 / (b_ - a_);
    for (int k = 0; k < m - 1; ++k) d.coef_[k] = dc[k] * scale;
  }
  return d;
}

}  // namespace kqch
