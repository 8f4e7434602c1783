#include "cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "chaosmarket/error.hpp"

namespace chaosmarket::cli {
namespace {

const double kDefaultBound = std::log(1e6);
// Long single runs random-walk through the equilibrium continuum, so the
// guard only catches true overflow toward 0 or infinity.
constexpr double kLongRunBound = 690.0;

Json range(double start, double stop, double step) {
  return Json{{"start", start}, {"stop", stop}, {"step", step}};
}

Json model(double a1 = 0.17, double w = 0.01, int n = 5, int m = 1) {
  return Json{{"m", m}, {"n", n}, {"w", w}, {"a1", a1}};
}

Json preset_patch(std::string_view name) {
  if (name == "fig2") return {{"a1_values", {0.049, 0.26, 0.39}}, {"horizon", 300}};
  if (name == "fig4") {
    return {{"a1_values", {0.049, 0.0495, 0.0496, 0.0497, 0.0498}}, {"horizon", 20000}};
  }
  if (name == "fig5") return {{"a1_values", {0.365, 0.38, 0.39, 0.4}}, {"horizon", 10000}};
  if (name == "fig3") return {{"kind", "zones"}, {"a1_grid", range(0.01, 0.45, 0.005)}};
  if (name == "fig10") {
    return {{"kind", "v_inf_a1"}, {"a1_grid", range(0.01, 0.5, 0.01)}, {"w_values", {0.005, 0.01, 0.02}}};
  }
  if (name == "fig11") {
    return {{"kind", "v_inf_w"}, {"w_grid", range(0.001, 0.03, 0.001)}, {"a1_values", {0.1, 0.2, 0.3}}};
  }
  if (name == "fig13") {
    return {{"kind", "independence_a1"},
            {"a1_grid", range(0.08, 0.3, 0.01)},
            {"w_values", {0.01}},
            {"ensemble", {{"runs", 600}}}};
  }
  if (name == "fig14") {
    return {{"kind", "independence_w"},
            {"w_grid", range(0.005, 0.025, 0.001)},
            {"a1_values", {0.2}},
            {"ensemble", {{"runs", 600}}}};
  }
  if (name == "fig6") return {{"write_returns", true}};
  if (name == "fig7" || name == "fig8") return Json::object();
  if (name == "fig9") {
    return {{"a1_values", {0.12, 0.17, 0.22, 0.27, 0.32}}, {"v0_values", {1e-5}}, {"random_walk", false}};
  }
  if (name == "figA1") return {{"a1_values", Json::array()}, {"random_walk", false}};
  if (name == "fig12") return Json::object();
  if (name == "fig15") {
    return {{"a1_values", Json::array()}, {"acf", {{"a1_values", {0.1, 0.14, 0.34}}}}};
  }
  if (name == "fig16" || name == "fig17") return Json::object();
  throw UsageError("unknown preset '" + std::string(name) + "'");
}

// JSON merge patch, except that "shock" blocks replace wholesale since their
// two forms are mutually exclusive.
void merge(Json& target, const Json& patch) {
  for (const auto& [key, value] : patch.items()) {
    if (value.is_null()) {
      target.erase(key);
    } else if (key != "shock" && value.is_object() && target.contains(key) && target[key].is_object()) {
      merge(target[key], value);
    } else {
      target[key] = value;
    }
  }
}

void reject_unknown_keys(const Json& defaults, const Json& user, const std::string& where) {
  if (!user.is_object()) return;
  for (const auto& [key, value] : user.items()) {
    if (key == "seed" && where.empty()) continue;
    if (!defaults.contains(key)) {
      throw UsageError("unknown config key '" + where + key + "'");
    }
    if (key != "shock" && defaults[key].is_object()) reject_unknown_keys(defaults[key], value, where + key + ".");
  }
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table{
      {"fig2", "simulate", "Fig. 2"},        {"fig3", "sweep", "Fig. 3"},
      {"fig4", "simulate", "Fig. 4"},        {"fig5", "simulate", "Fig. 5"},
      {"fig6", "lyapunov", "Fig. 6"},        {"fig7", "lyapunov", "Fig. 7"},
      {"fig8", "lyapunov", "Fig. 8"},        {"fig9", "lyapunov", "Fig. 9"},
      {"fig10", "sweep", "Fig. 10"},         {"fig11", "sweep", "Fig. 11"},
      {"fig12", "independence", "Fig. 12"},  {"fig13", "sweep", "Fig. 13"},
      {"fig14", "sweep", "Fig. 14"},         {"fig15", "independence", "Fig. 15"},
      {"fig16", "distribution", "Fig. 16"},  {"fig17", "distribution", "Fig. 17"},
      {"figA1", "lyapunov", "Fig. A1"},
  };
  return table;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Json default_config(std::string_view command) {
  if (command == "simulate") {
    return {{"model", model()},
            {"a1_values", {0.17}},
            {"p_star", 10.0},
            {"shock", {{"simple_return", 0.01}}},
            {"horizon", 300},
            {"classify_horizon", 5000},
            {"divergence_log_bound", kDefaultBound}};
  }
  if (command == "sweep") {
    return {{"kind", "zones"},
            {"model", model()},
            {"p_star", 10.0},
            {"a1_grid", range(0.01, 0.45, 0.005)},
            {"w_grid", range(0.005, 0.025, 0.001)},
            {"a1_values", {0.17}},
            {"w_values", {0.01}},
            {"shock", {{"simple_return", 0.01}}},
            {"classify_horizon", 5000},
            {"ensemble", {{"runs", 100}, {"horizon", 200}, {"v0", 1e-3}, {"tail_fraction", 0.25}}},
            {"independence", {{"n1", 30}, {"n2", 45}}}};
  }
  if (command == "lyapunov") {
    return {{"model", model()},
            {"p_star", 10.0},
            {"a1_values", {0.17}},
            {"v0_values", {1e-5, 1e-4, 1e-3}},
            {"runs", 100},
            {"horizon", 100},
            {"random_walk", true},
            {"random_walk_sigma", 0.03},
            {"write_returns", false},
            {"candidate_grid", range(0.04, 0.5, 0.005)}};
  }
  if (command == "independence") {
    return {{"model", model()},
            {"p_star", 10.0},
            {"a1_values", {0.12, 0.14, 0.18}},
            {"runs", 600},
            {"horizon", 60},
            {"v0", 1e-3},
            {"n1", 30},
            {"n2", 45},
            {"v_inf_source", "formula"},
            {"acf",
             {{"a1_values", Json::array()},
              {"steps", 100000},
              {"burn_in", 1000},
              {"max_lag", 20},
              {"shock", {{"simple_return", 0.01}}},
              {"divergence_log_bound", kLongRunBound}}}};
  }
  if (command == "distribution") {
    return {{"model", model(0.14)},
            {"p_star", 10.0},
            {"shock", {{"simple_return", 0.01}}},
            {"steps", 100000},
            {"burn_in", 1000},
            {"bins", 200},
            {"tail_sigma", 3.0},
            {"divergence_log_bound", kLongRunBound}};
  }
  if (command == "equilibrium") {
    return {{"m", 1},
            {"a1_values", range(0.05, 0.4, 0.05)},
            {"w_values", {0.005, 0.01, 0.02}},
            {"n_values", {3, 5, 10}},
            {"p_star_values", {1.0, 10.0, 100.0}},
            {"linear_model",
             {{"a_values", {-0.9, -0.5, 0.0, 0.5, 0.9}}, {"p_star", 10.0}, {"r0", 0.01}, {"horizon", 200}}}};
  }
  throw UsageError("unknown command '" + std::string(command) + "'");
}

Json resolve_config(std::string_view command, std::string_view preset, const Json& user) {
  Json config = default_config(command);
  if (!preset.empty()) {
    const Preset* p = find_preset(preset);
    if (p == nullptr) throw UsageError("unknown preset '" + std::string(preset) + "'");
    if (p->command != command) {
      throw UsageError("preset '" + std::string(preset) + "' belongs to the '" + std::string(p->command) +
                       "' command");
    }
    merge(config, preset_patch(preset));
  }
  if (!user.is_null()) {
    if (!user.is_object()) throw UsageError("config file must hold a JSON object");
    reject_unknown_keys(config, user, "");
    merge(config, user);
  }
  return config;
}

Json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("config file " + path.string() + ": " + e.what());
  }
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const Json& config) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CHAOS_MARKET_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || *env == '-') throw UsageError("CHAOS_MARKET_SEED must be an unsigned integer");
    return v;
  }
  if (config.contains("seed")) {
    if (!config["seed"].is_number_unsigned()) throw UsageError("config seed must be an unsigned integer");
    return config["seed"].get<std::uint64_t>();
  }
  return 0;
}

std::vector<double> grid_values(const Json& spec, std::string_view what) {
  std::vector<double> out;
  if (spec.is_array()) {
    for (const auto& v : spec) out.push_back(v.get<double>());
  } else if (spec.is_object()) {
    const double start = spec.at("start").get<double>();
    const double stop = spec.at("stop").get<double>();
    const double step = spec.at("step").get<double>();
    if (!(step > 0.0) || !(stop >= start)) {
      throw ParameterError(std::string(what) + ": grid needs step > 0 and stop >= start");
    }
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long long i = 0; i < count; ++i) {
      // snap to 12 decimals so grid points print as typed
      out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else {
    throw UsageError(std::string(what) + ": expected an array or {start, stop, step}");
  }
  if (out.empty()) throw ParameterError(std::string(what) + ": grid is empty");
  return out;
}

ShockSpec shock_from_json(const Json& j, double p_star) {
  const bool simple = j.contains("simple_return");
  const bool log_form = j.contains("r0");
  if (simple == log_form) throw UsageError("shock: give exactly one of simple_return or r0");
  const ShockSpec shock = simple ? ShockSpec::from_simple_return(p_star, j["simple_return"].get<double>())
                                 : ShockSpec{p_star, j["r0"].get<double>()};
  shock.validate();
  return shock;
}

}  // namespace chaosmarket::cli
