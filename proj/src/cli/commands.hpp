#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace chaosmarket::cli {

struct OutputFile {
  std::string name;
  std::string contents;
};

struct CommandResult {
  std::vector<OutputFile> files;
  /// Written as summary.json; also the programmatic result.
  Json summary;
};

struct RunRequest {
  std::string command;
  std::string preset;  // empty for none
  Json config;         // fully resolved
  std::uint64_t seed = 0;
  int threads = 1;
};

CommandResult cmd_simulate(const Json& config);
CommandResult cmd_sweep(const Json& config, std::uint64_t seed, int threads);
CommandResult cmd_lyapunov(const Json& config, std::uint64_t seed, int threads);
CommandResult cmd_independence(const Json& config, std::uint64_t seed, int threads);
CommandResult cmd_distribution(const Json& config);
CommandResult cmd_equilibrium(const Json& config);

CommandResult run_command(const RunRequest& request);

/// Resolved config, seed, preset, figure and file list.  Thread count is
/// left out so outputs do not depend on it.
Json manifest(const RunRequest& request, const CommandResult& result);

/// Every file, summary.json and manifest.json, each through a temporary
/// file renamed into place.
void write_outputs(const std::filesystem::path& dir, const RunRequest& request, const CommandResult& result);

}  // namespace chaosmarket::cli
