#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "chaosmarket/error.hpp"
#include "cli/commands.hpp"

namespace cli = chaosmarket::cli;

namespace {

constexpr int kUsage = 1;
constexpr int kNumeric = 2;

struct Flags {
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

void add_common_flags(CLI::App& sub, Flags& flags) {
  sub.add_option("--config", flags.config_path, "JSON file merged over the preset")->check(CLI::ExistingFile);
  sub.add_option("--preset", flags.preset, "figure preset, e.g. fig2");
  sub.add_option("--out", flags.out_dir, "output directory")->capture_default_str();
  sub.add_option("--seed", flags.seed, "ensemble seed (falls back to CHAOS_MARKET_SEED)");
  sub.add_option("--threads", flags.threads, "worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

int run(const std::string& command, const Flags& flags) {
  cli::RunRequest request;
  request.command = command;
  request.preset = flags.preset;
  request.threads = flags.threads;
  const auto user = flags.config_path.empty() ? chaosmarket::Json() : cli::load_config_file(flags.config_path);
  request.config = cli::resolve_config(command, flags.preset, user);
  request.seed = cli::resolve_seed(flags.seed, request.config);
  request.config.erase("seed");

  const auto result = cli::run_command(request);
  cli::write_outputs(flags.out_dir, request, result);
  std::cout << result.summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chaotic price dynamics from a fuzzy trend-following / contrarian demand rule"};
  Flags flags;
  bool list_presets = false;
  app.add_flag("--list-presets", list_presets, "print preset names and exit");

  for (auto command : cli::kCommands) {
    auto* sub = app.add_subcommand(std::string(command), "run the " + std::string(command) + " analysis");
    add_common_flags(*sub, flags);
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  if (list_presets) {
    for (const auto& p : cli::presets()) std::cout << p.name << "\t" << p.command << "\t" << p.figure << "\n";
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kNumeric;
  }
}
