#pragma once

#include "kqch/linalg.hpp"

#include <vector>

namespace kqch {

// Dense rank-4 tensor over a tangent space of small dimension.  Used for
// (0,4) curvature-type tensors and, with the last index raised, for their
// (1,3) versions.  Index order follows R(X,Y,Z,U): T(i,j,k,l).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int dim) : d_(dim), v_(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

  int dim() const { return d_; }

  double& operator()(int i, int j, int k, int l) { return v_[idx(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return v_[idx(i, j, k, l)]; }

  double max_abs() const;

  Tensor4& operator+=(const Tensor4& o);
  Tensor4& operator-=(const Tensor4& o);
  Tensor4& operator*=(double s);
  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
  friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
  friend Tensor4 operator*(double s, Tensor4 a) { return a *= s; }

  // T(X,Y,Z,U) for concrete vectors given in the tensor's basis.
  double contract(const Vec& x, const Vec& y, const Vec& z, const Vec& u) const;

  // Change of basis: columns of V are the new basis vectors expressed in
  // the old one; returns T'(a,b,c,e) = T(i,j,k,l) V(i,a) V(j,b) V(k,c) V(l,e).
  Tensor4 project(const Mat& V) const;

  // Contract the last slot with a matrix: T'(i,j,k,m) = T(i,j,k,l) M(l,m).
  // With M = g^{-1} this raises the last index.
  Tensor4 contract_last(const Mat& M) const;

 private:
  std::size_t idx(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * d_ + j) * d_ + k) * d_ + l;
  }
  int d_ = 0;
  std::vector<double> v_;
};

}  // namespace kqch
