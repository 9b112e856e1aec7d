#pragma once

#include "kqch/diffgeo.hpp"
#include "kqch/families.hpp"
#include "kqch/invariants.hpp"
#include "kqch/sweep.hpp"

#include <map>
#include <string>
#include <vector>

namespace kqch {

// Per-statement residual report over a list of sampled points.
struct CheckReport {
  std::string name;
  std::string statement;  // what the residual measures
  std::vector<Vec> points;
  std::vector<double> residuals;  // worst violation per point
  double tolerance = 0.0;
  bool pass = false;
  std::map<std::string, std::vector<double>> scalars;  // per-point extras
  std::string note;

  void finish() {
    pass = true;
    for (double r : residuals)
      if (!(r <= tolerance)) pass = false;
  }
};

struct Tolerances {
  double b_structure = 1e-6;       // structural-form conditions
  double b0_structure = 1e-4;      // covariant-derivative closed form and scalars
  double qch_residual = 1e-5;      // decomposition residual, relative
  double integrability = 1e-3;     // relative, stacked differencing
  double qc_invariance = 1e-4;     // relative to curvature scale
  double scalar_invariant = 1e-5;  // a' + k'^2 relation
  double composition = 1e-8;       // metric agreement of composed transforms
  double flatness = 1e-4;          // curvature decay, relative
  double classify_dead_zone = 1e-8;
};

// Structural conditions making every dilatational image locally conformal
// Kahler: an involutive hyperplane field, an involutive structural plane,
// and d eta~ proportional to the Kahler form along D with factor k != 0.
CheckReport check_b_distribution(const MetricField& field, const DistributionField& dist,
                                 const std::vector<Vec>& points, const Tolerances& tol = {},
                                 Exec exec = Exec::parallel);

// Stronger conditions (symmetric invariant D-block of nabla eta, theta = 0)
// plus their consequences: the closed form of nabla eta, p = 0, the
// k-transport law and the scalar-curvature formulas in terms of k and p*.
// Rejects non-Kahler fields.
CheckReport check_b0_distribution(const MetricField& field, const DistributionField& dist,
                                  const std::vector<Vec>& points, const Tolerances& tol = {},
                                  Exec exec = Exec::parallel);

// Differential relations forced on (a, b, c) by the second Bianchi
// identity in a principal frame: da and db proportional to eta with the
// stated factors, dc proportional to eta, theta = theta* = 0.
CheckReport check_integrability(const MetricField& field, const DistributionField& dist,
                                const std::vector<Vec>& points, const Tolerances& tol = {},
                                Exec exec = Exec::parallel);

// Invariance of the curvature remainder under a biconformal transformation,
// the scalar law a' + k'^2 = e^{-2u}(a + k^2), and the (0,2) trace
// invariant.
struct QcInvarianceReport {
  CheckReport qc;       // remainder comparison, relative to curvature scale
  CheckReport scalar;   // a' + k'^2 law
  CheckReport ricci;    // (0,2) invariant comparison
};
QcInvarianceReport check_qc_invariance(const MetricField& src, const MetricField& transformed,
                                       const DistributionField& dist,
                                       const BiconformalPair& pair,
                                       const std::vector<Vec>& points,
                                       const Tolerances& tol = {}, Exec exec = Exec::parallel);

enum class CurvatureClass { Positive, Zero, Negative };

// Sign with a dead zone around zero.
CurvatureClass classify_sign(double value, double dead_zone = 1e-8);

// Sign of a + k^2, the biconformally invariant classifier.
CurvatureClass classify(const MetricField& field, const DistributionField& dist, const Vec& p,
                        const Tolerances& tol = {});

// Constructs the flattening exponents v = ln((a+k^2)/k^2)/2 and
// 2u = int (a/k) ds from numerically sampled radial profiles, applies the
// transform and reports the curvature decay per point.  Throws when
// a + k^2 <= 0, when the decomposition residual says the field is not of
// quasi-constant holomorphic curvatures, or when the field is already flat.
struct FlattenResult {
  BiconformalPair pair;
  MetricField flattened;
  CheckReport report;  // |R'| / |R| per point
};
FlattenResult flatten(const MetricField& field, const DistributionField& dist,
                      double r_lo = 0.0, double r_hi = 0.0, const Tolerances& tol = {},
                      Exec exec = Exec::parallel);

// Deterministic sample of points in the safe interior of the domain.
std::vector<Vec> sample_points(const Domain& domain, int dim, int count, std::uint64_t seed,
                               double margin_frac = 0.12);

// Kahler-symmetry residual of the numeric curvature per point, relative to
// the tensor scale.
CheckReport check_symmetries(const MetricField& field, const DistributionField& dist,
                             const std::vector<Vec>& points, double tolerance = 1e-6,
                             Exec exec = Exec::parallel);

// Decomposition residual of the numeric curvature per point (relative), with
// the per-point coefficients as scalars.
CheckReport check_qch(const MetricField& field, const DistributionField& dist,
                      const std::vector<Vec>& points, double tolerance = 1e-5,
                      Exec exec = Exec::parallel);

// Residual of the Ricci identity for decomposable tensors, relative.
CheckReport check_ricci_identity(const MetricField& field, const DistributionField& dist,
                                 const std::vector<Vec>& points, double tolerance = 1e-4,
                                 Exec exec = Exec::parallel);

// Second Bianchi identity of the numeric curvature, relative.
CheckReport check_second_bianchi(const MetricField& field, const std::vector<Vec>& points,
                                 double tolerance = 1e-4, Exec exec = Exec::parallel);

}  // namespace kqch
