#pragma once

#include "kqch/linalg.hpp"
#include "kqch/tangent_space.hpp"

#include <functional>
#include <string>

namespace kqch {

// Radially symmetric chart domain: annulus r0 < |x| < r1 (ball when r0 = 0).
struct Domain {
  double r0 = 0.0;
  double r1 = 1.0;

  bool contains(const Vec& p) const {
    const double r = p.norm();
    return (r0 == 0.0 ? r >= 0.0 : r > r0) && r < r1;
  }
  double boundary_distance(const Vec& p) const {
    const double r = p.norm();
    return (r0 > 0.0) ? std::min(r - r0, r1 - r) : (r1 - r);
  }
};

// A metric given as a chart-domain field p -> SPD matrix, together with the
// constant standard complex structure.  Analytic first/second derivative
// providers are optional; the engine falls back to central differences.
struct MetricField {
  int n = 0;
  Domain domain;
  Mat J;
  std::function<Mat(const Vec&)> value;
  // d1(p)[k] = d g / d x_k
  std::function<std::vector<Mat>(const Vec&)> derivative1;
  // d2(p)[k * dim + l] = d^2 g / (d x_k d x_l)
  std::function<std::vector<Mat>(const Vec&)> derivative2;
  std::string name;

  int dim() const { return 2 * n; }
};

// Unit vector field spanning the structural plane together with J.
struct DistributionField {
  std::function<Vec(const Vec&)> xi;  // unit in the field metric
};

// xi = position / |position|_g; the canonical concentric-sphere structure.
DistributionField radial_distribution(const MetricField& field);

// xi = constant coordinate axis normalized in g; degenerate control case.
DistributionField axis_distribution(const MetricField& field, int axis = 0);

TangentSpace tangent_space_at(const MetricField& field, const Vec& p);
AdaptedFrame frame_at(const MetricField& field, const DistributionField& dist, const Vec& p);

// Metric, complex structure and structural covectors in chart coordinates.
StructureData coordinate_structure(const MetricField& field, const DistributionField& dist,
                                   const Vec& p);

}  // namespace kqch
