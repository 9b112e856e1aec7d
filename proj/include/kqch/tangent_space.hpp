#pragma once

#include "kqch/linalg.hpp"
#include "kqch/tensor4.hpp"

namespace kqch {

// Pointwise data of a Kahler tangent space: metric g, complex structure J
// (J*J = -Id, g(JX,JY) = g(X,Y)), complex dimension n, real dimension 2n.
struct TangentSpace {
  int n = 0;
  Mat J;
  Mat g;

  int dim() const { return 2 * n; }

  // Throws std::invalid_argument if g is not SPD or not J-compatible.
  void validate(double tol = 1e-10) const;
};

TangentSpace make_tangent_space(int n, const Mat& g);

// g-orthonormal basis (xi, J xi, e_1, J e_1, ..., e_{n-1}, J e_{n-1});
// the first two vectors span the structural plane, the rest span its
// J-invariant complement D.
struct AdaptedFrame {
  TangentSpace space;
  Mat vectors;          // columns are the frame vectors in coordinates
  Vec eta;              // covector of the first frame vector: eta = g * v0
  Vec eta_tilde;        // covector of the second frame vector

  int n() const { return space.n; }
  int dim() const { return space.dim(); }
  Vec vector(int a) const { return vectors.col(a); }

  // Worst violation of g-orthonormality and of the J-pairing of columns.
  double residual() const;
};

// Completes xi/|xi| to an adapted frame by Gram-Schmidt over the standard
// axis vectors, each accepted candidate followed by its J-image.
// Candidates whose projection onto the remaining complement has norm
// below `skip_tol` are skipped, which keeps the frame deterministic.
AdaptedFrame adapted_frame(const TangentSpace& space, const Vec& xi,
                           double skip_tol = 1e-8);

// Metric, complex structure and the two structural 1-forms expressed in an
// arbitrary basis; all invariant tensors are evaluated against this data.
struct StructureData {
  Mat g;
  Mat J;        // matrix of J in the same basis, (JX)^i = J(i,j) X^j
  Vec eta;
  Vec eta_tilde;
};

// StructureData of an adapted frame itself: g = Id, block J, eta = e0,
// eta_tilde = e1.
StructureData orthonormal_structure(int n);

// Max-norm violation of the four curvature-tensor identities of a Kahler
// metric: antisymmetry in both pairs, the first Bianchi identity and
// J-invariance R(X,Y)JZ = J R(X,Y)Z.  J is the complex structure in the
// tensor's basis.
double kahler_symmetry_residual(const Tensor4& T, const Mat& J);

// Overload for tensors in adapted-frame components.
double kahler_symmetry_residual(const Tensor4& T);

struct CurvatureScalars {
  double tau = 0.0;     // full scalar curvature
  double sigma = 0.0;   // Ricci curvature of the structural directions
  double kappa = 0.0;   // sectional curvature of the structural plane
  double horizontal = 0.0;  // scalar curvature of D
  double mixed = 0.0;       // mixed scalar curvature
  double vertical = 0.0;    // = kappa
};

// Scalar curvature invariants of a (0,4) tensor given in adapted-frame
// components, with rho(Y,Z) = sum_i R(e_i, Y, Z, e_i).
CurvatureScalars curvature_scalars(const Tensor4& R_frame, int n);

// Angle between span{X, JX} and the structural plane, from
// cos^2(phi) = eta(X)^2 + eta~(X)^2.  X must be g-unit.
double angle_phi(const Vec& x, const AdaptedFrame& frame, double unit_tol = 1e-8);

}  // namespace kqch
