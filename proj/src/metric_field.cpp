#include "kqch/metric_field.hpp"

#include <cmath>
#include <stdexcept>

namespace kqch {

DistributionField radial_distribution(const MetricField& field) {
  auto value = field.value;
  DistributionField d;
  d.xi = [value](const Vec& p) {
    const double r = p.norm();
    if (r < 1e-14) throw std::domain_error("radial_distribution: undefined at the origin");
    const Mat g = value(p);
    return Vec(p / std::sqrt(p.dot(g * p)));
  };
  return d;
}

DistributionField axis_distribution(const MetricField& field, int axis) {
  auto value = field.value;
  const int dim = field.dim();
  DistributionField d;
  d.xi = [value, dim, axis](const Vec& p) {
    Vec e = Vec::Unit(dim, axis);
    const Mat g = value(p);
    return Vec(e / std::sqrt(e.dot(g * e)));
  };
  return d;
}

TangentSpace tangent_space_at(const MetricField& field, const Vec& p) {
  TangentSpace s;
  s.n = field.n;
  s.J = field.J;
  s.g = field.value(p);
  return s;
}

AdaptedFrame frame_at(const MetricField& field, const DistributionField& dist, const Vec& p) {
  return adapted_frame(tangent_space_at(field, p), dist.xi(p));
}

StructureData coordinate_structure(const MetricField& field, const DistributionField& dist,
                                   const Vec& p) {
  StructureData s;
  s.g = field.value(p);
  s.J = field.J;
  const Vec xi = dist.xi(p);
  s.eta = s.g * xi;
  s.eta_tilde = s.g * (field.J * xi);
  return s;
}

}  // namespace kqch
