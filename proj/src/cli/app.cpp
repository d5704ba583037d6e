#include <charconv>
#include <cstdlib>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "latentspec/cli/commands.hpp"
#include "latentspec/cli/config.hpp"
#include "latentspec/errors.hpp"
#include "latentspec/parallel.hpp"

namespace latentspec::cli {

namespace {

unsigned thread_count(unsigned flag) {
  if (const char* env = std::getenv("LATENTSPEC_THREADS"); env && *env) {
    const std::string_view text(env);
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw ParseError("LATENTSPEC_THREADS must be a non-negative integer, got '" + std::string(text) + "'");
    flag = v;
  }
  return resolve_threads(flag);
}

void add_dk_options(CLI::App* cmd, DkSource& dk) {
  cmd->add_option("--family", dk.family, "NEF-QVF family: normal, poisson, binomial, negbin, gamma, ghs");
  cmd->add_option("--s", dk.s, "Family parameter (binomial trials, negbin size, gamma/ghs shape)");
  cmd->add_option("--leek", dk.leek, "Normal data with unknown variance: tail start t of the Leek estimator");
  cmd->add_option("--dk-file", dk.dk_file, "CSV holding the n diagonal entries of D_k");
}

void add_scaling_options(CLI::App* cmd, ScalingConfig& scaling, std::string& scale) {
  cmd->add_option("--c-tilde", scaling.c_tilde, "Rank threshold c~")->capture_default_str();
  cmd->add_option("--eta", scaling.eta, "Threshold decay exponent, tau = scale * k^-eta")->capture_default_str();
  cmd->add_option("--scale", scale, "Scale coefficient, or 'auto' for plateau calibration")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Latent linear space estimation for NEF-QVF data"};
  app.require_subcommand(1);
  unsigned threads_flag = 0;
  app.add_option("--threads", threads_flag, "Worker threads (0 = all cores; LATENTSPEC_THREADS overrides)");

  EstimateArgs est;
  std::string est_scale = "auto";
  auto* estimate = app.add_subcommand("estimate", "Estimate the latent row space of a k x n data matrix");
  estimate->add_option("data", est.data, "CSV data, rows = variables, columns = samples")->required();
  add_dk_options(estimate, est.dk);
  estimate->add_option("--rank", est.rank, "'auto' or 'fixed:R'")->capture_default_str();
  add_scaling_options(estimate, est.scaling, est_scale);
  estimate->add_flag("--transpose", est.transpose, "Data rows are samples");
  estimate->add_option("--out", est.out_dir, "Output directory")->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run seeded simulation replications from a JSON config");
  simulate->add_option("config", sim.config, "JSON config")->required();
  simulate->add_flag("--full", sim.full, "Run the full n/k/r grid at 100 reps");
  simulate->add_option("--out", sim.out_dir, "Output directory (overrides output_dir)");

  DistanceArgs dist;
  auto* distance = app.add_subcommand("distance", "Distance d(M, M_hat) between two row spaces");
  distance->add_option("m", dist.m, "CSV with the rows of M")->required();
  distance->add_option("m_hat", dist.m_hat, "CSV with the rows of M_hat")->required();
  distance->add_flag("--normalize-m", dist.normalize_m, "Scale M's rows to unit norm first");
  distance->add_option("--json", dist.json_out, "Also write a JSON record here");

  SubsampleArgs sub;
  std::string sub_scale = "auto";
  auto* subsample = app.add_subcommand("subsample", "Median d over random row subsets of growing size");
  subsample->add_option("data", sub.data, "CSV data")->required();
  subsample->add_option("m", sub.m, "CSV with the rows of the reference M")->required();
  add_dk_options(subsample, sub.dk);
  subsample->add_option("--k-grid", sub.k_grid, "Row counts to sample")->required()->delimiter(',');
  subsample->add_option("--reps", sub.reps, "Subsets per row count")->capture_default_str();
  subsample->add_option("--seed", sub.seed, "Random seed")->capture_default_str();
  subsample->add_option("--rank", sub.rank, "'auto' or 'fixed:R'")->capture_default_str();
  add_scaling_options(subsample, sub.scaling, sub_scale);
  subsample->add_flag("--normalize-m", sub.normalize_m, "Scale M's rows to unit norm first");
  subsample->add_flag("--transpose", sub.transpose, "Data rows are samples");
  subsample->add_option("--out", sub.out_dir, "Output directory")->capture_default_str();

  RankSweepArgs sweep;
  auto* rank_sweep = app.add_subcommand("rank-sweep", "Estimate at each forced rank and report d against M");
  rank_sweep->add_option("data", sweep.data, "CSV data")->required();
  add_dk_options(rank_sweep, sweep.dk);
  rank_sweep->add_option("--r-grid", sweep.r_grid, "Forced ranks")->required()->delimiter(',');
  rank_sweep->add_option("--m", sweep.m, "CSV with the rows of the reference M");
  rank_sweep->add_flag("--normalize-m", sweep.normalize_m, "Scale M's rows to unit norm first");
  rank_sweep->add_flag("--transpose", sweep.transpose, "Data rows are samples");
  rank_sweep->add_option("--out", sweep.out, "Also write the table to this CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const unsigned threads = thread_count(threads_flag);
    if (estimate->parsed()) {
      est.scaling.scale_coefficient = parse_scale(est_scale);
      est.scaling.validate();
      est.threads = threads;
      return cmd_estimate(est, out, err);
    }
    if (simulate->parsed()) {
      sim.threads = threads;
      return cmd_simulate(sim, out, err);
    }
    if (distance->parsed()) return cmd_distance(dist, out, err);
    if (subsample->parsed()) {
      sub.scaling.scale_coefficient = parse_scale(sub_scale);
      sub.scaling.validate();
      sub.threads = threads;
      return cmd_subsample(sub, out, err);
    }
    sweep.threads = threads;
    return cmd_rank_sweep(sweep, out, err);
  } catch (const SupportViolation& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& [row, col] : e.cells()) err << "  row " << row + 1 << ", column " << col + 1 << '\n';
    return kExitData;
  } catch (const OutOfSupport& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const RankDeficient& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LengthMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateTail& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const EmptyGrid& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace latentspec::cli
