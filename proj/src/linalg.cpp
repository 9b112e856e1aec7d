#include "kqch/linalg.hpp"

namespace kqch {

Mat standard_complex_structure(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    J(2 * k, 2 * k + 1) = -1.0;
    J(2 * k + 1, 2 * k) = 1.0;
  }
  return J;
}

Vec random_direction(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

Mat random_hermitian_spd(std::mt19937_64& rng, int n, double spread) {
  const int d = 2 * n;
  std::normal_distribution<double> gauss(0.0, spread);
  Mat A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = gauss(rng);
  Mat g = Mat::Identity(d, d) + A.transpose() * A / d;
  // Average with the J-conjugate; preserves positivity and makes
  // g(JX, JY) = g(X, Y) hold exactly.
  const Mat J = standard_complex_structure(n);
  g = 0.5 * (g + J.transpose() * g * J);
  return 0.5 * (g + g.transpose());
}

}  // namespace kqch
