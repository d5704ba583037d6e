#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "latentspec/latent_space.hpp"
#include "latentspec/nef_qvf.hpp"
#include "latentspec/simulation.hpp"

namespace latentspec::cli {

using nlohmann::json;

// {"family": "binomial", "s": 20}
Family family_from_json(const json& j);
json to_json(const Family& f);

// {"c_tilde": 1.0, "eta": 0.3333, "scale": "auto" | <number>}; missing keys keep defaults.
ScalingConfig scaling_from_json(const json& j);
json to_json(const ScalingConfig& s);

// "auto" or "fixed:R".
RankMode parse_rank_mode(std::string_view text);
std::string rank_mode_text(const RankMode& mode);

// Parses "auto" or a positive number.
std::optional<double> parse_scale(std::string_view text);

struct SimulationPlan {
  std::vector<ScenarioConfig> cells;
  std::string output_dir = ".";
};

// Config keys: scenario, n, k, r (each a scalar or an array; the plan is
// their cross product in that nesting order), reps, seed, scaling,
// rank_mode, output_dir. With `full`, the n/r/k grid is replaced by
// n = 15 (r = 1..5), n = 100 (r = 1..5), n = 200 (r = 6, 8, 10, 12) and
// k = 1e3, 5e3, 1e4, 1e5 at 100 reps, for the configured scenarios or
// all five when none are given.
SimulationPlan plan_from_json(const json& j, bool full = false);

}  // namespace latentspec::cli
