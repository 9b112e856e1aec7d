#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace kqch {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Standard complex structure on R^{2n}: pairs (x_{2k}, x_{2k+1}) are the
// real/imaginary parts of the k-th complex coordinate, J acts as
// multiplication by i.
Mat standard_complex_structure(int n);

// Uniform point on the unit sphere in R^dim.
Vec random_direction(std::mt19937_64& rng, int dim);

// Random symmetric positive definite matrix compatible with J, i.e.
// J^T g J = g.  Used by generate-and-check tests.
Mat random_hermitian_spd(std::mt19937_64& rng, int n, double spread = 0.5);

}  // namespace kqch
