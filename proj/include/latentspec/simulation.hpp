#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latentspec/latent_space.hpp"
#include "latentspec/matrix.hpp"
#include "latentspec/nef_qvf.hpp"

namespace latentspec {

enum class ScenarioKind { NormalA, PoissonB, BinomialC, NegBinD, GammaE };

// Accepts "a".."e" or the family names ("normal", "poisson", ...).
ScenarioKind scenario_from_name(std::string_view name);
std::string scenario_name(ScenarioKind kind);

// The family each scenario draws from (binomial s=20, negbin s=10, gamma shape 10).
Family scenario_family(ScenarioKind kind);

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::NormalA;
  std::size_t n = 15;
  std::size_t k = 1000;
  std::size_t r = 5;
  std::size_t reps = 50;
  std::uint64_t seed = 0;
  ScalingConfig scaling;
  // Rank used for M_hat in the per-rep "auto" column (AutoRank takes its
  // thresholds from `scaling`); the fixed column always uses the true r.
  RankMode rank_mode = AutoRank{};

  void validate() const;
};

struct ScenarioDraw {
  Matrix phi;    // k x r
  Matrix m;      // r x n
  Matrix theta;  // k x n, phi * m; success probabilities in scenario (c)
  DataMatrix y;
  std::vector<double> true_deltas;
  Matrix w_exact;  // k^-1 phi^T phi

  // M^T W M with the finite-k W.
  Matrix h() const;
  Matrix residuals() const;
};

// Deterministic in (cfg.seed, rep_index, cfg.scenario, n, k, r).
ScenarioDraw generate_scenario(const ScenarioConfig& cfg, std::size_t rep_index);

// Column means of the family variance over theta. For Binomial, theta is
// read as a success probability and converted to the mean s * theta.
std::vector<double> true_dk(const Matrix& theta, const Family& f);
std::vector<double> true_dk(const ScenarioDraw& draw, const Family& f);

struct ReplicationRecord {
  std::size_t rep = 0;
  std::size_t r_hat = 0;
  double d_fixed = 0.0;
  double d_auto = 0.0;  // NaN when r_hat = 0
  double rho = 0.0;
  std::optional<std::string> failure;
};

struct ReplicationStats {
  ScenarioConfig config;
  std::vector<ReplicationRecord> records;
  std::size_t r_correct = 0;
  std::size_t r_under = 0;
  std::size_t r_over = 0;
  std::size_t failures = 0;
  double d_median_fixed = 0.0;
  double d_median_auto = 0.0;
  double rho_median = 0.0;
};

// Type-7 sample quantile of the finite values; NaN if there are none.
double quantile(std::vector<double> values, double p);

// Runs cfg.reps independent replications on up to `threads` workers.
// Per-rep errors are recorded as failures and excluded from the aggregates.
// The result does not depend on the thread count.
ReplicationStats run_replications(const ScenarioConfig& cfg, unsigned threads = 1);

}  // namespace latentspec
