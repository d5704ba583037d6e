#include "latentspec/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "latentspec/cli/config.hpp"
#include "latentspec/errors.hpp"
#include "latentspec/io.hpp"
#include "latentspec/parallel.hpp"
#include "latentspec/random.hpp"
#include "latentspec/simulation.hpp"
#include "latentspec/subspace_metrics.hpp"
#include "latentspec/variance.hpp"

namespace latentspec::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

DataMatrix load_data(const std::string& path, bool transpose) {
  Matrix values = read_csv_file(path).values;
  if (transpose) values.transposeInPlace();
  return DataMatrix(std::move(values));
}

Matrix load_basis(const std::string& path, bool normalize) {
  Matrix values = read_csv_file(path).values;
  return normalize ? normalize_rows(values) : values;
}

VarianceEstimate make_dk(const DkSource& src, const DataMatrix& y, unsigned threads) {
  const int chosen = int(!src.family.empty()) + int(src.leek.has_value()) + int(!src.dk_file.empty());
  if (chosen != 1) throw ParseError("give exactly one of --family, --leek or --dk-file");
  if (src.leek) return estimate_dk_leek(y, *src.leek, threads);
  if (!src.dk_file.empty()) {
    const Matrix d = read_csv_file(src.dk_file).values;
    if (static_cast<std::size_t>(d.size()) != y.cols())
      throw LengthMismatch("--dk-file has " + std::to_string(d.size()) + " values but the data has " +
                           std::to_string(y.cols()) + " columns");
    std::vector<double> deltas(static_cast<std::size_t>(d.size()));
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      for (Eigen::Index j = 0; j < d.cols(); ++j)
        deltas[static_cast<std::size_t>(i * d.cols() + j)] = d(i, j);
    return explicit_dk(std::move(deltas));
  }
  return estimate_dk_qvf(y, Family::from_name(src.family, src.s), threads);
}

json dk_json(const VarianceEstimate& d) {
  json j;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, dk_method::Qvf>) {
          j["method"] = "qvf";
          j["family"] = to_json(m.family);
        } else if constexpr (std::is_same_v<T, dk_method::LeekNormal>) {
          j["method"] = "leek";
          j["t"] = m.t;
        } else if constexpr (std::is_same_v<T, dk_method::KnownUnit>) {
          j["method"] = "known_unit";
        } else {
          j["method"] = "explicit";
        }
      },
      d.method);
  j["deltas"] = d.deltas;
  j["negative_flag"] = d.negative_flag;
  return j;
}

RankMode with_scaling(RankMode mode, const ScalingConfig& scaling) {
  if (auto* a = std::get_if<AutoRank>(&mode)) a->scaling = scaling;
  return mode;
}

Matrix column(const Vector& v) { return Matrix(v); }

std::string cell(double v) { return format_double(v); }

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ParseError("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
  const DataMatrix y = load_data(args.data, args.transpose);
  if (y.rows() <= y.cols())
    err << "warning: k = " << y.rows() << " rows is not larger than n = " << y.cols() << " columns\n";
  const VarianceEstimate d = make_dk(args.dk, y, args.threads);
  const RankMode mode = with_scaling(parse_rank_mode(args.rank), args.scaling);
  EstimateOptions options;
  options.threads = args.threads;
  const SubspaceEstimate est = estimate_latent_space(y, d, mode, options);

  ensure_dir(args.out_dir);
  const fs::path dir(args.out_dir);
  write_csv_file((dir / "m_hat.csv").string(), est.m_hat);
  write_csv_file((dir / "eigenvalues.csv").string(), column(est.all_eigenvalues), {"eigenvalue"});

  json record;
  record["k"] = y.rows();
  record["n"] = y.cols();
  record["r_hat"] = est.r_hat();
  record["status"] = est.empty() ? "empty_subspace" : "ok";
  record["eigenvalues"] = std::vector<double>(est.all_eigenvalues.data(),
                                              est.all_eigenvalues.data() + est.all_eigenvalues.size());
  record["dk"] = dk_json(d);
  if (const auto* fixed = std::get_if<FixedRank>(&est.rank)) {
    record["mode"] = "fixed";
    record["r"] = fixed->r;
  } else {
    const RankEstimate& r = std::get<RankEstimate>(est.rank);
    record["mode"] = "auto";
    record["scaled_eigenvalues"] = r.scaled_eigenvalues;
    record["tau_tilde"] = r.tau_tilde;
    record["c_tilde"] = r.threshold;
    record["scale_coefficient"] = r.scale_coefficient;
    record["eta"] = r.eta;
    if (r.calibration) {
      const CalibrationTrace& c = *r.calibration;
      record["calibration"] = {{"grid", c.grid},
                               {"r_hats", c.r_hats},
                               {"chosen", c.chosen},
                               {"no_plateau", c.no_plateau}};
      if (!c.no_plateau)
        record["calibration"]["plateau"] = {
            {"first", c.plateau_first}, {"last", c.plateau_last}, {"rank", c.plateau_rank}};
    }
  }
  open_out(dir / "rank.json") << record.dump(2) << '\n';

  out << "r_hat " << est.r_hat() << '\n';
  if (est.empty()) {
    err << "error: no eigenvalue of the adjusted gram exceeds the rank threshold; the estimated subspace is empty\n";
    return kExitEmpty;
  }
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream&) {
  std::ifstream in(args.config);
  if (!in) throw ParseError("cannot open config '" + args.config + "'");
  json config;
  try {
    config = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(args.config + ": " + e.what());
  }
  const SimulationPlan plan = plan_from_json(config, args.full);
  const std::string out_dir = args.out_dir.empty() ? plan.output_dir : args.out_dir;
  ensure_dir(out_dir);
  const fs::path dir(out_dir);

  auto summary = open_out(dir / "summary.csv");
  auto reps = open_out(dir / "reps.csv");
  summary << "scenario,n,k,r,reps,r_correct,r_under,r_over,d_median_fixed,d_median_auto,rho_median\n";
  reps << "scenario,n,k,r,rep,r_hat,d_fixed,d_auto,rho,failure\n";
  json meta;
  meta["rng"] = std::string(Rng::kAlgorithm);
  meta["cells"] = json::array();

  for (const ScenarioConfig& cfg : plan.cells) {
    const ReplicationStats stats = run_replications(cfg, args.threads);
    const std::string key = scenario_name(cfg.scenario) + "," + std::to_string(cfg.n) + "," +
                            std::to_string(cfg.k) + "," + std::to_string(cfg.r);
    summary << key << ',' << cfg.reps << ',' << stats.r_correct << ',' << stats.r_under << ',' << stats.r_over << ','
            << cell(stats.d_median_fixed) << ',' << cell(stats.d_median_auto) << ',' << cell(stats.rho_median)
            << '\n';
    for (const auto& rec : stats.records) {
      reps << key << ',' << rec.rep << ',' << rec.r_hat << ',' << cell(rec.d_fixed) << ',' << cell(rec.d_auto)
           << ',' << cell(rec.rho) << ',';
      if (rec.failure) {
        std::string msg = *rec.failure;
        std::replace(msg.begin(), msg.end(), '"', '\'');
        reps << '"' << msg << '"';
      }
      reps << '\n';
    }
    meta["cells"].push_back({{"scenario", scenario_name(cfg.scenario)},
                             {"n", cfg.n},
                             {"k", cfg.k},
                             {"r", cfg.r},
                             {"reps", cfg.reps},
                             {"seed", cfg.seed},
                             {"scaling", to_json(cfg.scaling)},
                             {"rank_mode", rank_mode_text(cfg.rank_mode)},
                             {"failures", stats.failures}});
    out << key << ": r_hat = r in " << stats.r_correct << '/' << cfg.reps << " (under " << stats.r_under
        << ", over " << stats.r_over << "), median d " << stats.d_median_fixed << '\n';
  }
  open_out(dir / "run.json") << meta.dump(2) << '\n';
  return kExitOk;
}

int cmd_distance(const DistanceArgs& args, std::ostream& out, std::ostream& err) {
  const RowSpaceBasis m(load_basis(args.m, args.normalize_m));
  const RowSpaceBasis m_hat(read_csv_file(args.m_hat).values);
  const SubspaceDistance d = subspace_distance(m, m_hat);
  if (!d.m_hat_orthonormal) err << "warning: rows of M_hat are not orthonormal; d depends on its basis\n";
  out << format_double(d.value) << '\n';
  if (!args.json_out.empty()) {
    json record{{"d", d.value},
                {"n", m.dim()},
                {"r", m.rank()},
                {"r_hat", m_hat.rank()},
                {"normalize_m", args.normalize_m},
                {"m_hat_orthonormal", d.m_hat_orthonormal}};
    open_out(args.json_out) << record.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_subsample(const SubsampleArgs& args, std::ostream& out, std::ostream&) {
  const DataMatrix y = load_data(args.data, args.transpose);
  const RowSpaceBasis m(load_basis(args.m, args.normalize_m));
  if (static_cast<std::size_t>(m.dim()) != y.cols())
    throw LengthMismatch("M has " + std::to_string(m.dim()) + " columns but the data has " +
                         std::to_string(y.cols()));
  if (args.k_grid.empty()) throw ParseError("--k-grid is empty");
  if (args.reps < 1) throw ParseError("--reps must be at least 1");
  for (std::size_t k : args.k_grid)
    if (k < 1 || k > y.rows())
      throw ParseError("k = " + std::to_string(k) + " is outside [1, " + std::to_string(y.rows()) + "]");
  const RankMode mode = with_scaling(parse_rank_mode(args.rank), args.scaling);
  const std::size_t total = y.rows();

  std::vector<double> medians;
  for (std::size_t g = 0; g < args.k_grid.size(); ++g) {
    const std::size_t k = args.k_grid[g];
    std::vector<double> ds(args.reps, kNaN);
    parallel_for(args.reps, args.threads, [&](std::size_t rep) {
      Rng rng = Rng::for_stream(args.seed, g, rep);
      std::vector<std::size_t> idx(total);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      for (std::size_t i = 0; i < k; ++i) {
        const auto span = static_cast<double>(total - i);
        const std::size_t j = i + std::min(static_cast<std::size_t>(rng.uniform01() * span), total - i - 1);
        std::swap(idx[i], idx[j]);
      }
      std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
      Matrix sub(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(y.cols()));
      for (std::size_t i = 0; i < k; ++i) sub.row(static_cast<Eigen::Index>(i)) = y.values().row(static_cast<Eigen::Index>(idx[i]));
      const DataMatrix ys(std::move(sub));
      const SubspaceEstimate est = estimate_latent_space(ys, make_dk(args.dk, ys, 1), mode);
      if (!est.empty()) ds[rep] = subspace_distance(m, RowSpaceBasis(est.m_hat)).value;
    });
    medians.push_back(quantile(ds, 0.5));
  }

  ensure_dir(args.out_dir);
  auto curve = open_out(fs::path(args.out_dir) / "curve.csv");
  curve << "k,d_median\n";
  for (std::size_t g = 0; g < args.k_grid.size(); ++g) {
    curve << args.k_grid[g] << ',' << cell(medians[g]) << '\n';
    out << args.k_grid[g] << ',' << cell(medians[g]) << '\n';
  }
  return kExitOk;
}

int cmd_rank_sweep(const RankSweepArgs& args, std::ostream& out, std::ostream&) {
  const DataMatrix y = load_data(args.data, args.transpose);
  if (args.r_grid.empty()) throw ParseError("--r-grid is empty");
  for (std::size_t r : args.r_grid)
    if (r < 1 || r > y.cols())
      throw ParseError("forced rank " + std::to_string(r) + " is outside [1, " + std::to_string(y.cols()) + "]");
  std::optional<RowSpaceBasis> m;
  if (!args.m.empty()) {
    m.emplace(load_basis(args.m, args.normalize_m));
    if (static_cast<std::size_t>(m->dim()) != y.cols())
      throw LengthMismatch("M has " + std::to_string(m->dim()) + " columns but the data has " +
                           std::to_string(y.cols()));
  }
  const VarianceEstimate d = make_dk(args.dk, y, args.threads);
  const SymmetricEigen eig = sym_eigen(adjusted_gram(y, d, args.threads));

  std::ostringstream table;
  table << "r_hat,eigenvalue" << (m ? ",d" : "") << '\n';
  for (std::size_t r : args.r_grid) {
    const SubspaceEstimate est = subspace_from_eigen(eig, y.rows(), FixedRank{r});
    table << r << ',' << cell(eig.values(static_cast<Eigen::Index>(r - 1)));
    if (m) table << ',' << cell(subspace_distance(*m, RowSpaceBasis(est.m_hat)).value);
    table << '\n';
  }
  out << table.str();
  if (!args.out.empty()) open_out(args.out) << table.str();
  return kExitOk;
}

}  // namespace latentspec::cli
