#include "latentspec/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "latentspec/errors.hpp"
#include "latentspec/parallel.hpp"
#include "latentspec/random.hpp"
#include "latentspec/subspace_metrics.hpp"
#include "latentspec/variance.hpp"

namespace latentspec {

namespace {

constexpr int kBinomialTrials = 20;
constexpr double kNegBinSize = 10.0;
constexpr double kGammaShape = 10.0;

template <class Draw>
Matrix fill(Eigen::Index rows, Eigen::Index cols, Draw&& draw) {
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = draw();
  return out;
}

Matrix binomial_design(std::size_t r, std::size_t n) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < r; ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    for (std::size_t j = r; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0 / static_cast<double>(r);
  }
  return m;
}

void check_theta(const Matrix& theta, ScenarioKind kind) {
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  for (Eigen::Index j = 0; j < theta.cols(); ++j) {
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
      const double t = theta(i, j);
      bool ok = std::isfinite(t);
      switch (kind) {
        case ScenarioKind::NormalA: break;
        case ScenarioKind::PoissonB: ok = ok && t >= 0.0; break;
        case ScenarioKind::BinomialC: ok = ok && t >= 0.0 && t <= 1.0; break;
        case ScenarioKind::NegBinD:
        case ScenarioKind::GammaE: ok = ok && t > 0.0; break;
      }
      if (!ok && bad.size() < 10) bad.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  if (!bad.empty()) throw SupportViolation("scenario produced a mean outside the family domain", std::move(bad));
}

double draw_observation(ScenarioKind kind, double theta, Rng& rng) {
  switch (kind) {
    case ScenarioKind::NormalA: return sample_normal(rng, theta, 1.0);
    case ScenarioKind::PoissonB: return sample_poisson(rng, theta);
    case ScenarioKind::BinomialC: return sample_binomial(rng, kBinomialTrials, theta);
    case ScenarioKind::NegBinD: return sample_negbin(rng, kNegBinSize, kNegBinSize / (kNegBinSize + theta));
    case ScenarioKind::GammaE: return sample_gamma(rng, kGammaShape, kGammaShape / theta);
  }
  return 0.0;
}

}  // namespace

ScenarioKind scenario_from_name(std::string_view name) {
  if (name == "a" || name == "normal") return ScenarioKind::NormalA;
  if (name == "b" || name == "poisson") return ScenarioKind::PoissonB;
  if (name == "c" || name == "binomial") return ScenarioKind::BinomialC;
  if (name == "d" || name == "negbin") return ScenarioKind::NegBinD;
  if (name == "e" || name == "gamma") return ScenarioKind::GammaE;
  throw InvalidParameter("unknown scenario '" + std::string(name) + "'");
}

std::string scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::NormalA: return "normal";
    case ScenarioKind::PoissonB: return "poisson";
    case ScenarioKind::BinomialC: return "binomial";
    case ScenarioKind::NegBinD: return "negbin";
    case ScenarioKind::GammaE: return "gamma";
  }
  return "unknown";
}

Family scenario_family(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::NormalA: return Family::normal();
    case ScenarioKind::PoissonB: return Family::poisson();
    case ScenarioKind::BinomialC: return Family::binomial(kBinomialTrials);
    case ScenarioKind::NegBinD: return Family::negbin(kNegBinSize);
    case ScenarioKind::GammaE: return Family::gamma(kGammaShape);
  }
  return Family::normal();
}

void ScenarioConfig::validate() const {
  if (n < 2) throw InvalidParameter("n must be at least 2");
  if (r < 1 || r >= n) throw InvalidParameter("r must satisfy 1 <= r < n");
  if (k < 1) throw InvalidParameter("k must be at least 1");
  if (reps < 1) throw InvalidParameter("reps must be at least 1");
  scaling.validate();
  if (const auto* fixed = std::get_if<FixedRank>(&rank_mode); fixed && (fixed->r < 1 || fixed->r > n))
    throw InvalidParameter("fixed rank outside [1, n]");
}

Matrix ScenarioDraw::h() const { return m.transpose() * w_exact * m; }

Matrix ScenarioDraw::residuals() const { return y.values() - theta; }

ScenarioDraw generate_scenario(const ScenarioConfig& cfg, std::size_t rep_index) {
  cfg.validate();
  Rng rng = Rng::for_stream(cfg.seed, rep_index);
  const auto k = static_cast<Eigen::Index>(cfg.k);
  const auto n = static_cast<Eigen::Index>(cfg.n);
  const auto r = static_cast<Eigen::Index>(cfg.r);

  Matrix phi;
  Matrix m;
  switch (cfg.scenario) {
    case ScenarioKind::NormalA:
      phi = fill(k, r, [&] { return sample_normal(rng, 0.0, 1.0); });
      m = fill(r, n, [&] { return sample_uniform(rng, 1.0, 10.0); });
      break;
    case ScenarioKind::PoissonB:
      phi = fill(k, r, [&] { return sample_noncentral_chisq(rng, 9.0, 1.0); });
      m = fill(r, n, [&] { return sample_uniform(rng, 1.0, 5.0); });
      break;
    case ScenarioKind::BinomialC:
      phi = fill(k, r, [&] { return sample_uniform(rng, 0.05, 0.95); });
      m = binomial_design(cfg.r, cfg.n);
      break;
    case ScenarioKind::NegBinD:
    case ScenarioKind::GammaE:
      phi = fill(k, r, [&] { return sample_uniform(rng, 0.5, 2.0); });
      m = fill(r, n, [&] { return sample_uniform(rng, 0.3, 1.5); });
      break;
  }

  Matrix theta = phi * m;
  check_theta(theta, cfg.scenario);
  Matrix y(k, n);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < n; ++j) y(i, j) = draw_observation(cfg.scenario, theta(i, j), rng);

  std::vector<double> deltas = true_dk(theta, scenario_family(cfg.scenario));
  Matrix w = phi.transpose() * phi / static_cast<double>(cfg.k);
  return ScenarioDraw{std::move(phi), std::move(m),      std::move(theta), DataMatrix(std::move(y)),
                      std::move(deltas), std::move(w)};
}

std::vector<double> true_dk(const Matrix& theta, const Family& f) {
  const double scale = f.kind() == FamilyKind::Binomial ? f.s() : 1.0;
  std::vector<double> out(static_cast<std::size_t>(theta.cols()), 0.0);
  for (Eigen::Index j = 0; j < theta.cols(); ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < theta.rows(); ++i) sum += variance_from_mean(f, scale * theta(i, j));
    out[static_cast<std::size_t>(j)] = sum / static_cast<double>(theta.rows());
  }
  return out;
}

std::vector<double> true_dk(const ScenarioDraw& draw, const Family& f) { return true_dk(draw.theta, f); }

double quantile(std::vector<double> values, double p) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ReplicationStats run_replications(const ScenarioConfig& cfg, unsigned threads) {
  cfg.validate();
  const Family family = scenario_family(cfg.scenario);
  RankMode second = AutoRank{cfg.scaling};
  if (const auto* fixed = std::get_if<FixedRank>(&cfg.rank_mode)) second = *fixed;

  ReplicationStats stats;
  stats.config = cfg;
  stats.records.resize(cfg.reps);
  parallel_for(cfg.reps, threads, [&](std::size_t rep) {
    ReplicationRecord& rec = stats.records[rep];
    rec.rep = rep;
    try {
      const ScenarioDraw draw = generate_scenario(cfg, rep);
      const VarianceEstimate d_hat = cfg.scenario == ScenarioKind::NormalA ? known_unit_dk(cfg.n)
                                                                           : estimate_dk_qvf(draw.y, family);
      rec.rho = dk_error(d_hat, draw.true_deltas);
      const SymmetricEigen eig = sym_eigen(adjusted_gram(draw.y, d_hat));
      const RowSpaceBasis truth(draw.m);

      const SubspaceEstimate fixed = subspace_from_eigen(eig, cfg.k, FixedRank{cfg.r});
      rec.d_fixed = subspace_distance(truth, RowSpaceBasis(fixed.m_hat)).value;

      const SubspaceEstimate chosen = subspace_from_eigen(eig, cfg.k, second);
      rec.r_hat = chosen.r_hat();
      rec.d_auto = chosen.empty() ? std::numeric_limits<double>::quiet_NaN()
                                  : subspace_distance(truth, RowSpaceBasis(chosen.m_hat)).value;
    } catch (const Error& e) {
      rec.failure = e.what();
      rec.r_hat = 0;
      rec.d_fixed = rec.d_auto = rec.rho = std::numeric_limits<double>::quiet_NaN();
    }
  });

  std::vector<double> d_fixed, d_auto, rho;
  for (const auto& rec : stats.records) {
    if (rec.failure) {
      ++stats.failures;
      continue;
    }
    if (rec.r_hat == cfg.r) ++stats.r_correct;
    else if (rec.r_hat < cfg.r) ++stats.r_under;
    else ++stats.r_over;
    d_fixed.push_back(rec.d_fixed);
    d_auto.push_back(rec.d_auto);
    rho.push_back(rec.rho);
  }
  stats.d_median_fixed = quantile(std::move(d_fixed), 0.5);
  stats.d_median_auto = quantile(std::move(d_auto), 0.5);
  stats.rho_median = quantile(std::move(rho), 0.5);
  return stats;
}

}  // namespace latentspec
