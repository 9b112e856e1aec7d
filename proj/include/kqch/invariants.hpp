#pragma once

#include "kqch/tangent_space.hpp"
#include "kqch/tensor4.hpp"

namespace kqch {

enum class InvariantKind { Pi, Phi, Psi };

// The three invariant Kahler tensors of the structure (g, J, D).  Pi is the
// constant-holomorphic-curvature tensor, Phi couples D with the structural
// plane, Psi is supported on the structural plane alone.
Tensor4 invariant_tensor(InvariantKind kind, const StructureData& s);

// Convenience: invariant tensor in adapted-frame components.
Tensor4 invariant_tensor(InvariantKind kind, const AdaptedFrame& frame);

// a*Pi + b*Phi + c*Psi over the given structure.
Tensor4 qch_tensor(double a, double b, double c, const StructureData& s);

struct QchCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  // Max-norm of R - a*Pi - b*Phi - c*Psi; small iff R has quasi-constant
  // holomorphic sectional curvatures.
  double residual = 0.0;
};

// Reads (a, b, c) off the horizontal, mixed and vertical sectional
// curvatures of a tensor in adapted-frame components and reports the
// reconstruction residual.  Requires n >= 2.
QchCoefficients qch_decompose(const Tensor4& R_frame, int n);

// Holomorphic sectional curvature profile a + b cos^2(phi) + c cos^4(phi).
double hol_profile(const QchCoefficients& coeffs, double phi);

// Inverts the scalar relations tau/sigma/kappa -> (a, b, c).  n >= 2.
QchCoefficients coefficients_from_scalars(double tau, double sigma, double kappa, int n);

// Residual of the Ricci identity
//   rho = (tau-2sigma)/(2(n-1)) g + (2n sigma-tau)/(2(n-1)) (eta x eta + eta~ x eta~)
// which holds for every tensor of quasi-constant holomorphic curvatures.
double ricci_identity_residual(const Tensor4& R_frame, int n);

// The remainder R - a*Pi - b*Phi - c*Psi as a (1,3) tensor (last index
// raised with g^{-1}); a biconformal invariant.  Decomposes internally;
// the tensor is given in adapted-frame components.
Tensor4 qc_tensor(const Tensor4& R_frame, int n);

// Same remainder with explicit coefficients, in an arbitrary basis.  Used
// to compare the invariant across metrics in matched coordinates.
Tensor4 qc_tensor_with(const Tensor4& R04, const QchCoefficients& coeffs,
                       const StructureData& s);

}  // namespace kqch
