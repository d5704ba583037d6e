#include "latentspec/cli/config.hpp"

#include <charconv>
#include <cmath>

#include "latentspec/errors.hpp"

namespace latentspec::cli {

namespace {

std::size_t as_count(const json& v, const char* key) {
  if (!v.is_number()) throw ParseError(std::string("'") + key + "' must be a number");
  const double d = v.get<double>();
  if (!(d >= 0.0) || std::floor(d) != d || d > 1e15)
    throw ParseError(std::string("'") + key + "' must be a non-negative integer");
  return static_cast<std::size_t>(d);
}

std::vector<std::size_t> count_list(const json& j, const char* key, std::vector<std::size_t> fallback) {
  if (!j.contains(key)) {
    if (fallback.empty()) throw ParseError(std::string("config is missing '") + key + "'");
    return fallback;
  }
  const json& v = j.at(key);
  std::vector<std::size_t> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(as_count(e, key));
  } else {
    out.push_back(as_count(v, key));
  }
  if (out.empty()) throw ParseError(std::string("'") + key + "' is an empty list");
  return out;
}

std::vector<ScenarioKind> scenario_list(const json& j) {
  if (!j.contains("scenario")) throw ParseError("config is missing 'scenario'");
  const json& v = j.at("scenario");
  std::vector<ScenarioKind> out;
  try {
    if (v.is_array()) {
      for (const auto& e : v) out.push_back(scenario_from_name(e.get<std::string>()));
    } else {
      out.push_back(scenario_from_name(v.get<std::string>()));
    }
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
  if (out.empty()) throw ParseError("'scenario' is an empty list");
  return out;
}

}  // namespace

Family family_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) throw ParseError("family config needs a 'family' key");
  std::optional<double> s;
  if (j.contains("s")) s = j.at("s").get<double>();
  return Family::from_name(j.at("family").get<std::string>(), s);
}

json to_json(const Family& f) {
  json j{{"family", f.name()}};
  if (f.has_s()) j["s"] = f.s();
  return j;
}

std::optional<double> parse_scale(std::string_view text) {
  if (text == "auto") return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v))
    throw ParseError("scale must be 'auto' or a positive number, got '" + std::string(text) + "'");
  return v;
}

ScalingConfig scaling_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("'scaling' must be an object");
  ScalingConfig s;
  if (j.contains("c_tilde")) s.c_tilde = j.at("c_tilde").get<double>();
  if (j.contains("eta")) s.eta = j.at("eta").get<double>();
  if (j.contains("scale")) {
    const json& v = j.at("scale");
    if (v.is_string()) {
      s.scale_coefficient = parse_scale(v.get<std::string>());
    } else if (v.is_number()) {
      s.scale_coefficient = v.get<double>();
    } else {
      throw ParseError("'scale' must be \"auto\" or a number");
    }
  }
  try {
    s.validate();
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
  return s;
}

json to_json(const ScalingConfig& s) {
  json j{{"c_tilde", s.c_tilde}, {"eta", s.eta}};
  if (s.scale_coefficient) j["scale"] = *s.scale_coefficient;
  else j["scale"] = "auto";
  return j;
}

RankMode parse_rank_mode(std::string_view text) {
  if (text == "auto") return AutoRank{};
  constexpr std::string_view prefix = "fixed:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    std::size_t r = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), r);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && r >= 1) return FixedRank{r};
  }
  throw ParseError("rank mode must be 'auto' or 'fixed:R' with R >= 1, got '" + std::string(text) + "'");
}

std::string rank_mode_text(const RankMode& mode) {
  if (const auto* fixed = std::get_if<FixedRank>(&mode)) return "fixed:" + std::to_string(fixed->r);
  return "auto";
}

SimulationPlan plan_from_json(const json& j, bool full) {
  if (!j.is_object()) throw ParseError("simulation config must be a JSON object");
  ScenarioConfig base;
  base.reps = j.contains("reps") ? as_count(j.at("reps"), "reps") : 50;
  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (v.is_number_unsigned()) base.seed = v.get<std::uint64_t>();
    else if (v.is_number_integer() && v.get<long long>() >= 0) base.seed = static_cast<std::uint64_t>(v.get<long long>());
    else throw ParseError("'seed' must be a non-negative integer");
  }
  if (j.contains("scaling")) base.scaling = scaling_from_json(j.at("scaling"));
  if (j.contains("rank_mode")) base.rank_mode = parse_rank_mode(j.at("rank_mode").get<std::string>());

  SimulationPlan plan;
  if (j.contains("output_dir")) plan.output_dir = j.at("output_dir").get<std::string>();

  std::vector<ScenarioKind> scenarios;
  if (full && !j.contains("scenario")) {
    scenarios = {ScenarioKind::NormalA, ScenarioKind::PoissonB, ScenarioKind::BinomialC, ScenarioKind::NegBinD,
                 ScenarioKind::GammaE};
  } else {
    scenarios = scenario_list(j);
  }

  struct Shape {
    std::size_t n;
    std::size_t r;
  };
  std::vector<Shape> shapes;
  std::vector<std::size_t> ks;
  if (full) {
    base.reps = 100;
    for (std::size_t r = 1; r <= 5; ++r) shapes.push_back({15, r});
    for (std::size_t r = 1; r <= 5; ++r) shapes.push_back({100, r});
    for (std::size_t r : {6, 8, 10, 12}) shapes.push_back({200, r});
    ks = {1000, 5000, 10000, 100000};
  } else {
    const auto ns = count_list(j, "n", {});
    const auto rs = count_list(j, "r", {});
    ks = count_list(j, "k", {});
    for (std::size_t n : ns)
      for (std::size_t r : rs) shapes.push_back({n, r});
  }

  for (ScenarioKind s : scenarios) {
    for (const Shape& shape : shapes) {
      for (std::size_t k : ks) {
        ScenarioConfig cfg = base;
        cfg.scenario = s;
        cfg.n = shape.n;
        cfg.r = shape.r;
        cfg.k = k;
        try {
          cfg.validate();
        } catch (const InvalidParameter& e) {
          throw ParseError("config cell n=" + std::to_string(cfg.n) + " k=" + std::to_string(cfg.k) +
                           " r=" + std::to_string(cfg.r) + ": " + e.what());
        }
        plan.cells.push_back(cfg);
      }
    }
  }
  return plan;
}

}  // namespace latentspec::cli
