#pragma once

#include <random>

#include <Eigen/Dense>

#include "latentspec/matrix.hpp"

namespace testing {

using latentspec::Matrix;

inline Matrix random_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = nd(gen);
  return a;
}

inline Matrix random_symmetric(std::mt19937_64& gen, Eigen::Index n) {
  const Matrix a = random_matrix(gen, n, n);
  return 0.5 * (a + a.transpose());
}

// Q factor of a Gaussian matrix: Haar-ish orthogonal.
inline Matrix random_orthogonal(std::mt19937_64& gen, Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(gen, n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

// Orthonormal rows spanning the row space of `rows` (full row rank assumed).
inline Matrix orthonormal_rows(const Matrix& rows) {
  Eigen::HouseholderQR<Matrix> qr(rows.transpose());
  const Matrix q = qr.householderQ() * Matrix::Identity(rows.cols(), rows.rows());
  return q.transpose();
}

}  // namespace testing
