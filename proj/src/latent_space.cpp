#include "latentspec/latent_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latentspec/errors.hpp"

namespace latentspec {

void ScalingConfig::validate() const {
  if (!(c_tilde > 0.0) || !std::isfinite(c_tilde)) throw InvalidParameter("c_tilde must be positive");
  if (!(eta > 0.0) || eta > 1.0) throw InvalidParameter("eta must lie in (0, 1]");
  if (scale_coefficient && (!(*scale_coefficient > 0.0) || !std::isfinite(*scale_coefficient)))
    throw InvalidParameter("scale coefficient must be positive");
}

std::size_t count_above(std::span<const double> eigenvalues, double tau, double c_tilde) {
  std::size_t count = 0;
  for (double alpha : eigenvalues)
    if (alpha / tau > c_tilde) ++count;
  return count;
}

std::vector<double> default_calibration_grid(std::span<const double> eigenvalues) {
  constexpr int kPoints = 40;
  constexpr double kLowDecade = -4.0;
  constexpr double kHighDecade = 1.0;
  double anchor = 1.0;
  if (!eigenvalues.empty()) {
    double top = eigenvalues[0];
    for (double a : eigenvalues) top = std::max(top, a);
    if (top > 0.0) anchor = top;
  }
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double decade = kLowDecade + (kHighDecade - kLowDecade) * i / (kPoints - 1);
    grid[static_cast<std::size_t>(i)] = anchor * std::pow(10.0, decade);
  }
  return grid;
}

CalibrationTrace calibrate_scale(std::span<const double> eigenvalues, std::size_t k, const ScalingConfig& cfg,
                                 std::span<const double> grid) {
  if (grid.empty()) throw EmptyGrid("calibration grid is empty");
  if (k < 1) throw InvalidParameter("row count k must be at least 1");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw InvalidParameter("calibration grid must be positive");
    if (i > 0 && grid[i] < grid[i - 1]) throw InvalidParameter("calibration grid must be sorted ascending");
  }
  const std::size_t n = eigenvalues.size();
  const double rate = std::pow(static_cast<double>(k), -cfg.eta);

  CalibrationTrace trace;
  trace.grid.assign(grid.begin(), grid.end());
  trace.r_hats.reserve(grid.size());
  for (double g : grid) trace.r_hats.push_back(count_above(eigenvalues, g * rate, cfg.c_tilde));

  std::size_t best_len = 0;
  for (std::size_t i = 0; i < grid.size();) {
    std::size_t j = i;
    while (j + 1 < grid.size() && trace.r_hats[j + 1] == trace.r_hats[i]) ++j;
    const std::size_t r = trace.r_hats[i];
    const std::size_t len = j - i + 1;
    if (r >= 1 && r < n && len >= best_len) {
      best_len = len;
      trace.plateau_first = i;
      trace.plateau_last = j;
      trace.plateau_rank = r;
    }
    i = j + 1;
  }
  if (best_len == 0) {
    trace.no_plateau = true;
    trace.chosen = 1.0;
  } else {
    trace.chosen = std::sqrt(grid[trace.plateau_first] * grid[trace.plateau_last]);
  }
  return trace;
}

RankEstimate estimate_rank(std::span<const double> eigenvalues, std::size_t k, const ScalingConfig& cfg) {
  cfg.validate();
  if (k < 1) throw InvalidParameter("row count k must be at least 1");
  RankEstimate est;
  est.eta = cfg.eta;
  est.threshold = cfg.c_tilde;
  if (cfg.scale_coefficient) {
    est.scale_coefficient = *cfg.scale_coefficient;
  } else {
    const auto grid = default_calibration_grid(eigenvalues);
    est.calibration = calibrate_scale(eigenvalues, k, cfg, grid);
    est.scale_coefficient = est.calibration->chosen;
  }
  est.tau_tilde = est.scale_coefficient * std::pow(static_cast<double>(k), -cfg.eta);
  est.scaled_eigenvalues.reserve(eigenvalues.size());
  for (double a : eigenvalues) est.scaled_eigenvalues.push_back(a / est.tau_tilde);
  est.r_hat = count_above(eigenvalues, est.tau_tilde, cfg.c_tilde);
  return est;
}

RankEstimate estimate_rank(const SymmetricEigen& eig, std::size_t k, const ScalingConfig& cfg) {
  return estimate_rank(std::span<const double>(eig.values.data(), eig.dim()), k, cfg);
}

Matrix adjusted_gram(const DataMatrix& y, const VarianceEstimate& d, unsigned threads) {
  if (d.deltas.size() != y.cols())
    throw LengthMismatch("variance correction has " + std::to_string(d.deltas.size()) +
                         " entries but the data has " + std::to_string(y.cols()) + " columns");
  Matrix g = gram_scaled(y, threads);
  for (std::size_t j = 0; j < d.deltas.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    g(jj, jj) -= d.deltas[j];
  }
  return g;
}

SubspaceEstimate subspace_from_eigen(const SymmetricEigen& eig, std::size_t k, const RankMode& mode) {
  const std::size_t n = eig.dim();
  SubspaceEstimate out;
  out.all_eigenvalues = eig.values;
  std::size_t r = 0;
  if (const auto* fixed = std::get_if<FixedRank>(&mode)) {
    if (fixed->r < 1 || fixed->r > n)
      throw InvalidParameter("fixed rank " + std::to_string(fixed->r) + " outside [1, " + std::to_string(n) + "]");
    r = fixed->r;
    out.rank = *fixed;
  } else {
    RankEstimate est = estimate_rank(eig, k, std::get<AutoRank>(mode).scaling);
    r = est.r_hat;
    out.rank = std::move(est);
  }
  const auto rows = static_cast<Eigen::Index>(r);
  out.m_hat = eig.vectors.leftCols(rows).transpose();
  out.eigenvalues.assign(eig.values.data(), eig.values.data() + rows);
  if (r == 0) out.status = SubspaceStatus::EmptySubspace;
  return out;
}

SubspaceEstimate estimate_latent_space(const DataMatrix& y, const VarianceEstimate& d, const RankMode& mode,
                                       const EstimateOptions& options) {
  if (const auto* fixed = std::get_if<FixedRank>(&mode); fixed && (fixed->r < 1 || fixed->r > y.cols()))
    throw InvalidParameter("fixed rank " + std::to_string(fixed->r) + " outside [1, " + std::to_string(y.cols()) +
                           "]");
  const Matrix r_hat = adjusted_gram(y, d, options.threads);
  return subspace_from_eigen(sym_eigen(r_hat, options.eigen), y.rows(), mode);
}

}  // namespace latentspec
