#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chaosmarket/export.hpp"

namespace chaosmarket::cli {

/// Bad flags, unknown presets, malformed or mistyped config files (exit 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kCommands[] = {"simulate", "sweep", "lyapunov",
                                                 "independence", "distribution", "equilibrium"};

struct Preset {
  std::string_view name;
  std::string_view command;
  std::string_view figure;
};

const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);

/// Built-in configuration of a command before any preset or file is applied.
Json default_config(std::string_view command);

/**
 * Resolved configuration: command defaults, then the preset, then the user
 * file, each merged as a JSON merge patch.  Keys the defaults do not know
 * are rejected so typos fail loudly.
 */
Json resolve_config(std::string_view command, std::string_view preset, const Json& user);

Json load_config_file(const std::filesystem::path& path);

/// Flag, then CHAOS_MARKET_SEED, then the config "seed" key, then 0.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const Json& config);

/// Numbers from either a JSON array or {"start", "stop", "step"}.
std::vector<double> grid_values(const Json& spec, std::string_view what);

ShockSpec shock_from_json(const Json& j, double p_star);

}  // namespace chaosmarket::cli
