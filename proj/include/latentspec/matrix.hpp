#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace latentspec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Observation matrix Y: rows are variables (k of them), columns are
// samples (n of them). Construction validates shape and finiteness, so a
// DataMatrix in hand is always usable by the estimators.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Matrix& values() const noexcept { return values_; }

 private:
  Matrix values_;
};

double frobenius_norm(const Matrix& a);

// k^-1 Y^T Y. Each entry is an independent sequential dot product over the
// rows, so the result is bit-identical for any thread count and exactly
// symmetric (upper triangle mirrored).
Matrix gram_scaled(const DataMatrix& y, unsigned threads = 1);

struct EigenOptions {
  double tolerance = 1e-10;
  int max_sweeps = 100;
  std::size_t max_dim = 512;
};

// Eigenvalues descending; column i of `vectors` pairs with values[i].
struct SymmetricEigen {
  Vector values;
  Matrix vectors;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(values.size()); }
};

// Cyclic Jacobi eigendecomposition of a dense symmetric matrix.
//
// Output convention (needed for reproducible subspace estimates, since an
// eigenvector is only defined up to sign):
//  - eigenvalues sorted descending;
//  - in every eigenvector the entry of largest magnitude is nonnegative,
//    the lowest index winning magnitude ties;
//  - exactly equal eigenvalues are ordered by their sign-fixed vectors,
//    lexicographically descending (so I_n yields e_1, ..., e_n).
//
// Throws NotSymmetric when max|A_ij - A_ji| > tolerance * |A|_F,
// NoConvergence when max_sweeps is exhausted, and InvalidParameter for a
// non-square input or one larger than max_dim.
SymmetricEigen sym_eigen(const Matrix& a, const EigenOptions& options = {});

}  // namespace latentspec
