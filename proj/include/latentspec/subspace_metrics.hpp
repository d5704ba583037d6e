#pragma once

#include "latentspec/matrix.hpp"

namespace latentspec {

inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kOrthonormalTolerance = 1e-10;
inline constexpr double kMaxConditionNumber = 1e12;

// A basis of a row space: r x n with full row rank. Construction checks
// the rank (smallest singular value > 1e-10 x largest, else RankDeficient)
// and records whether the rows are orthonormal.
class RowSpaceBasis {
 public:
  explicit RowSpaceBasis(Matrix rows);

  const Matrix& matrix() const noexcept { return rows_; }
  bool orthonormal() const noexcept { return orthonormal_; }
  Eigen::Index rank() const noexcept { return rows_.rows(); }
  Eigen::Index dim() const noexcept { return rows_.cols(); }

 private:
  Matrix rows_;
  bool orthonormal_ = false;
};

// Each row scaled to unit Euclidean norm (zero rows throw RankDeficient).
Matrix normalize_rows(const Matrix& rows);

// (B B^T)^-1 via a symmetric eigendecomposition; RankDeficient when the
// condition number exceeds 1e12.
Matrix gram_inverse(const Matrix& rows);

// Orthogonal projector B^T (B B^T)^-1 B onto the row space (B^T B when the
// basis is orthonormal).
Matrix projection_matrix(const RowSpaceBasis& basis);

struct SubspaceDistance {
  double value = 0.0;
  // False when M_hat failed the orthonormality check; the value is still
  // computed, but it is then no longer invariant to re-basing M_hat.
  bool m_hat_orthonormal = true;
};

// d(M, M_hat) = sqrt(|M^T - M_hat^T M_V|^2 + |M_hat^T - M^T V_M|^2) / sqrt(n r_hat)
// with M_V = M_hat M^T and V_M = (M M^T)^-1 M M_hat^T (Frobenius norms).
// M may be any full-rank basis; M_hat is expected to have orthonormal rows.
// The first term scales with M, so d is scale-free in M only when the
// row space of M lies inside that of M_hat.
SubspaceDistance subspace_distance(const RowSpaceBasis& m, const RowSpaceBasis& m_hat);

}  // namespace latentspec
