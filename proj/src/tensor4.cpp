#include "kqch/tensor4.hpp"

#include <cmath>
#include <stdexcept>

namespace kqch {

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::fabs(x));
  return m;
}

Tensor4& Tensor4::operator+=(const Tensor4& o) {
  if (o.d_ != d_) throw std::invalid_argument("Tensor4: dimension mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

Tensor4& Tensor4::operator-=(const Tensor4& o) {
  if (o.d_ != d_) throw std::invalid_argument("Tensor4: dimension mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

Tensor4& Tensor4::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

double Tensor4::contract(const Vec& x, const Vec& y, const Vec& z, const Vec& u) const {
  double acc = 0.0;
  for (int i = 0; i < d_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < d_; ++j) {
      if (y[j] == 0.0) continue;
      double acc_kl = 0.0;
      for (int k = 0; k < d_; ++k) {
        if (z[k] == 0.0) continue;
        double acc_l = 0.0;
        for (int l = 0; l < d_; ++l) acc_l += (*this)(i, j, k, l) * u[l];
        acc_kl += acc_l * z[k];
      }
      acc += acc_kl * x[i] * y[j];
    }
  }
  return acc;
}

namespace {

// Contract the first slot with V and rotate slots so four passes give the
// full basis change.
Tensor4 contract_first_and_cycle(const Tensor4& T, const Mat& V) {
  const int d = T.dim();
  Tensor4 out(d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        for (int a = 0; a < d; ++a) {
          double s = 0.0;
          for (int i = 0; i < d; ++i) s += T(i, j, k, l) * V(i, a);
          out(j, k, l, a) = s;
        }
  return out;
}

}  // namespace

Tensor4 Tensor4::project(const Mat& V) const {
  Tensor4 t = *this;
  for (int pass = 0; pass < 4; ++pass) t = contract_first_and_cycle(t, V);
  return t;
}

Tensor4 Tensor4::contract_last(const Mat& M) const {
  Tensor4 out(d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      for (int k = 0; k < d_; ++k)
        for (int m = 0; m < d_; ++m) {
          double s = 0.0;
          for (int l = 0; l < d_; ++l) s += (*this)(i, j, k, l) * M(l, m);
          out(i, j, k, m) = s;
        }
  return out;
}

}  // namespace kqch
