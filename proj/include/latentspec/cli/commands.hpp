#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latentspec/latent_space.hpp"

namespace latentspec::cli {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitEmpty = 4;

// How D_k is obtained; exactly one of family / leek / dk_file is used.
struct DkSource {
  std::string family;
  std::optional<double> s;
  std::optional<std::size_t> leek;
  std::string dk_file;
};

struct EstimateArgs {
  std::string data;
  DkSource dk;
  std::string rank = "auto";
  ScalingConfig scaling;
  bool transpose = false;
  std::string out_dir = ".";
  unsigned threads = 1;
};

struct SimulateArgs {
  std::string config;
  bool full = false;
  std::string out_dir;  // overrides the config's output_dir when set
  unsigned threads = 1;
};

struct DistanceArgs {
  std::string m;
  std::string m_hat;
  bool normalize_m = false;
  std::string json_out;
};

struct SubsampleArgs {
  std::string data;
  std::string m;
  DkSource dk;
  std::vector<std::size_t> k_grid;
  std::size_t reps = 50;
  std::uint64_t seed = 0;
  std::string rank = "auto";
  ScalingConfig scaling;
  bool normalize_m = false;
  bool transpose = false;
  std::string out_dir = ".";
  unsigned threads = 1;
};

struct RankSweepArgs {
  std::string data;
  DkSource dk;
  std::vector<std::size_t> r_grid;
  std::string m;
  bool normalize_m = false;
  bool transpose = false;
  std::string out;
  unsigned threads = 1;
};

// Each command returns its exit code; library errors propagate as
// exceptions and are mapped by run_cli.
int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_distance(const DistanceArgs& args, std::ostream& out, std::ostream& err);
int cmd_subsample(const SubsampleArgs& args, std::ostream& out, std::ostream& err);
int cmd_rank_sweep(const RankSweepArgs& args, std::ostream& out, std::ostream& err);

// Parses argv, dispatches, and maps exceptions to exit codes:
// 2 usage/parse/config, 3 support violation or rank-deficient M,
// 4 empty subspace, 1 anything else.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace latentspec::cli
