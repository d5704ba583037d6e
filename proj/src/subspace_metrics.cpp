#include "latentspec/subspace_metrics.hpp"

#include <cmath>
#include <string>

#include "latentspec/errors.hpp"

namespace latentspec {

RowSpaceBasis::RowSpaceBasis(Matrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) throw RankDeficient("row-space basis is empty");
  if (rows_.rows() > rows_.cols())
    throw RankDeficient("basis has more rows (" + std::to_string(rows_.rows()) + ") than columns");
  if (!rows_.allFinite()) throw InvalidParameter("basis contains NaN or Inf");

  const Matrix bbt = rows_ * rows_.transpose();
  const SymmetricEigen eig = sym_eigen(bbt);
  const double top = eig.values(0);
  const double bottom = eig.values(eig.values.size() - 1);
  // Singular values are square roots of these eigenvalues.
  if (!(top > 0.0) || !(bottom > 0.0) || std::sqrt(bottom / top) <= kRankTolerance)
    throw RankDeficient("basis rows are not linearly independent");
  orthonormal_ =
      frobenius_norm(bbt - Matrix::Identity(rows_.rows(), rows_.rows())) <= kOrthonormalTolerance;
}

Matrix normalize_rows(const Matrix& rows) {
  Matrix out = rows;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm == 0.0) throw RankDeficient("row " + std::to_string(i) + " is zero and cannot be normalized");
    out.row(i) /= norm;
  }
  return out;
}

Matrix gram_inverse(const Matrix& rows) {
  const SymmetricEigen eig = sym_eigen(rows * rows.transpose());
  const double top = eig.values(0);
  const double bottom = eig.values(eig.values.size() - 1);
  if (!(bottom > 0.0) || top / bottom > kMaxConditionNumber)
    throw RankDeficient("M M^T is singular or too ill-conditioned to invert");
  Vector inv = eig.values.cwiseInverse();
  return eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
}

Matrix projection_matrix(const RowSpaceBasis& basis) {
  const Matrix& b = basis.matrix();
  if (basis.orthonormal()) return b.transpose() * b;
  Matrix p = b.transpose() * gram_inverse(b) * b;
  return 0.5 * (p + p.transpose());
}

SubspaceDistance subspace_distance(const RowSpaceBasis& m, const RowSpaceBasis& m_hat) {
  if (m.dim() != m_hat.dim())
    throw LengthMismatch("M has " + std::to_string(m.dim()) + " columns but M_hat has " +
                         std::to_string(m_hat.dim()));
  const Matrix& mm = m.matrix();
  const Matrix& mh = m_hat.matrix();
  const Matrix m_v = mh * mm.transpose();                        // r_hat x r
  const Matrix v_m = gram_inverse(mm) * mm * mh.transpose();     // r x r_hat
  const double first = frobenius_norm(mm.transpose() - mh.transpose() * m_v);
  const double second = frobenius_norm(mh.transpose() - mm.transpose() * v_m);
  const double n = static_cast<double>(mm.cols());
  const double r_hat = static_cast<double>(mh.rows());
  SubspaceDistance out;
  out.value = std::sqrt(first * first + second * second) / std::sqrt(n * r_hat);
  out.m_hat_orthonormal = m_hat.orthonormal();
  return out;
}

}  // namespace latentspec
