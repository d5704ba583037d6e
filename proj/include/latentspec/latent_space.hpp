#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "latentspec/matrix.hpp"
#include "latentspec/variance.hpp"

namespace latentspec {

// Rank threshold scaling tau_k = scale_coefficient * k^-eta; an eigenvalue
// alpha counts toward the rank when alpha / tau_k > c_tilde.
struct ScalingConfig {
  double c_tilde = 1.0;
  double eta = 1.0 / 3.0;
  // nullopt selects the data-driven plateau calibration.
  std::optional<double> scale_coefficient;

  void validate() const;
};

// Faster-decaying thresholds that recover the Binomial rank at n = 100 and
// n = 200 respectively.
inline constexpr double kEtaDefault = 1.0 / 3.0;
inline constexpr double kEtaModerateN = 1.0 / 1.1;
inline constexpr double kEtaLargeN = 1.0 / 1.5;

struct CalibrationTrace {
  std::vector<double> grid;
  std::vector<std::size_t> r_hats;  // rank at each grid value
  double chosen = 1.0;
  // Inclusive grid-index range of the selected plateau (meaningless when no_plateau).
  std::size_t plateau_first = 0;
  std::size_t plateau_last = 0;
  std::size_t plateau_rank = 0;
  bool no_plateau = false;
};

struct RankEstimate {
  std::size_t r_hat = 0;
  std::vector<double> scaled_eigenvalues;  // alpha_i / tau_k, descending
  double tau_tilde = 0.0;
  double threshold = 0.0;  // c_tilde
  double scale_coefficient = 0.0;
  double eta = 0.0;
  std::optional<CalibrationTrace> calibration;
};

// Number of eigenvalues with alpha / tau > c_tilde (strict).
std::size_t count_above(std::span<const double> eigenvalues, double tau, double c_tilde);

// 40 log-spaced candidate coefficients spanning [1e-4, 1e1] times the leading
// eigenvalue (times 1 when no eigenvalue is positive). The grid is not
// scaled by k^eta, so the exponent keeps its effect on the threshold.
std::vector<double> default_calibration_grid(std::span<const double> eigenvalues);

// Scans `grid` (ascending, positive), recording the rank at each value,
// and picks the geometric midpoint of the longest run of consecutive grid
// values sharing one rank in [1, n). Ties go to the run with larger
// coefficients. No such run: coefficient 1 and no_plateau set.
// Throws EmptyGrid on an empty grid.
CalibrationTrace calibrate_scale(std::span<const double> eigenvalues, std::size_t k,
                                 const ScalingConfig& cfg, std::span<const double> grid);

// Threshold-count rank estimate on descending eigenvalues. Uses the literal
// scale coefficient from cfg, or calibrates one over the default grid.
RankEstimate estimate_rank(std::span<const double> eigenvalues, std::size_t k, const ScalingConfig& cfg);
RankEstimate estimate_rank(const SymmetricEigen& eig, std::size_t k, const ScalingConfig& cfg);

// k^-1 Y^T Y - diag(deltas); exactly symmetric.
Matrix adjusted_gram(const DataMatrix& y, const VarianceEstimate& d, unsigned threads = 1);

struct AutoRank {
  ScalingConfig scaling;
};
struct FixedRank {
  std::size_t r = 1;
};
using RankMode = std::variant<AutoRank, FixedRank>;

enum class SubspaceStatus { Ok, EmptySubspace };

struct SubspaceEstimate {
  Matrix m_hat;                     // r_hat x n, orthonormal rows
  std::vector<double> eigenvalues;  // leading r_hat eigenvalues
  Vector all_eigenvalues;           // all n eigenvalues of the adjusted gram
  std::variant<RankEstimate, FixedRank> rank;
  SubspaceStatus status = SubspaceStatus::Ok;

  std::size_t r_hat() const noexcept { return static_cast<std::size_t>(m_hat.rows()); }
  bool empty() const noexcept { return status == SubspaceStatus::EmptySubspace; }
};

struct EstimateOptions {
  unsigned threads = 1;
  EigenOptions eigen;
};

// Leading-eigenvector subspace of an already decomposed adjusted gram.
SubspaceEstimate subspace_from_eigen(const SymmetricEigen& eig, std::size_t k, const RankMode& mode);

// Full pipeline: adjusted gram -> eigendecomposition -> rank (Auto) ->
// rows of M_hat are the leading eigenvectors. An automatic rank of zero is
// reported as SubspaceStatus::EmptySubspace with a 0 x n m_hat.
SubspaceEstimate estimate_latent_space(const DataMatrix& y, const VarianceEstimate& d, const RankMode& mode,
                                       const EstimateOptions& options = {});

}  // namespace latentspec
