#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chaosmarket/error.hpp"
#include "cli/commands.hpp"

using namespace chaosmarket;
using namespace chaosmarket::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunRequest request(std::string command, std::string preset, const Json& user, int threads) {
  RunRequest r;
  r.command = std::move(command);
  r.preset = std::move(preset);
  r.config = resolve_config(r.command, r.preset, user);
  r.seed = 17;
  r.threads = threads;
  return r;
}

void check_identical(const CommandResult& a, const CommandResult& b) {
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].name == b.files[i].name);
    CHECK(a.files[i].contents == b.files[i].contents);
  }
  CHECK(a.summary.dump() == b.summary.dump());
}

}  // namespace

TEST_CASE("presets") {
  CHECK(presets().size() == 17);
  for (const auto& p : presets()) {
    const Json c = resolve_config(p.command, p.name, nullptr);
    CHECK(c.is_object());
  }
  CHECK(find_preset("fig2")->command == "simulate");
  CHECK(find_preset("fig99") == nullptr);
  CHECK_THROWS_AS(resolve_config("simulate", "fig99", nullptr), UsageError);
  CHECK_THROWS_AS(resolve_config("simulate", "fig3", nullptr), UsageError);
  CHECK_THROWS_AS(default_config("plot"), UsageError);
}

TEST_CASE("config resolution") {
  const Json user = Json::parse(R"({"model": {"a1": 0.2}, "horizon": 50})");
  const Json c = resolve_config("simulate", "fig2", user);
  CHECK(c["model"]["a1"] == 0.2);
  CHECK(c["model"]["n"] == 5);
  CHECK(c["horizon"] == 50);
  CHECK(c["a1_values"].size() == 3);

  const Json swap = resolve_config("simulate", "", Json::parse(R"({"shock": {"r0": 0.02}})"));
  CHECK_FALSE(swap["shock"].contains("simple_return"));
  CHECK(shock_from_json(swap["shock"], 10.0).r0 == 0.02);

  CHECK_THROWS_AS(resolve_config("simulate", "", Json::parse(R"({"horizn": 5})")), UsageError);
  CHECK_THROWS_AS(resolve_config("simulate", "", Json::parse(R"({"model": {"b": 1}})")), UsageError);
  CHECK_THROWS_AS(resolve_config("simulate", "", Json::parse("[1, 2]")), UsageError);
  CHECK_THROWS_AS(shock_from_json(Json::parse(R"({"r0": 0.1, "simple_return": 0.1})"), 10.0), UsageError);
  CHECK(shock_from_json(Json::parse(R"({"simple_return": 0.01})"), 10.0).r0 == doctest::Approx(std::log(1.01)));
}

TEST_CASE("grids") {
  const auto g = grid_values(Json::parse(R"({"start": 0.05, "stop": 0.4, "step": 0.05})"), "a1");
  REQUIRE(g.size() == 8);
  CHECK(g[2] == 0.15);
  CHECK(g.back() == 0.4);
  CHECK(grid_values(Json::parse("[0.3]"), "a1") == std::vector<double>{0.3});
  CHECK_THROWS_AS(grid_values(Json::array(), "a1"), ParameterError);
  CHECK_THROWS_AS(grid_values(Json::parse(R"({"start": 1, "stop": 0, "step": 0.1})"), "a1"), ParameterError);
  CHECK_THROWS_AS(grid_values(Json(3.0), "a1"), UsageError);
}

TEST_CASE("seed resolution") {
  const Json with_seed = Json::parse(R"({"seed": 5})");
  ::unsetenv("CHAOS_MARKET_SEED");
  CHECK(resolve_seed(std::nullopt, Json::object()) == 0);
  CHECK(resolve_seed(std::nullopt, with_seed) == 5);
  ::setenv("CHAOS_MARKET_SEED", "99", 1);
  CHECK(resolve_seed(std::nullopt, with_seed) == 99);
  CHECK(resolve_seed(7, with_seed) == 7);
  ::setenv("CHAOS_MARKET_SEED", "x1", 1);
  CHECK_THROWS_AS(resolve_seed(std::nullopt, with_seed), UsageError);
  ::unsetenv("CHAOS_MARKET_SEED");
}

TEST_CASE("results do not depend on the thread count") {
  const Json small_sweep = Json::parse(R"({"a1_grid": [0.1, 0.17, 0.3], "ensemble": {"runs": 40, "horizon": 60}})");
  check_identical(run_command(request("sweep", "fig13", small_sweep, 1)),
                  run_command(request("sweep", "fig13", small_sweep, 3)));
  check_identical(run_command(request("sweep", "", Json::parse(R"({"a1_grid": [0.02, 0.2, 0.4]})"), 1)),
                  run_command(request("sweep", "", Json::parse(R"({"a1_grid": [0.02, 0.2, 0.4]})"), 2)));
  const Json small_lyap = Json::parse(R"({"runs": 30, "horizon": 40, "write_returns": true})");
  check_identical(run_command(request("lyapunov", "fig6", small_lyap, 1)),
                  run_command(request("lyapunov", "fig6", small_lyap, 4)));
  const Json small_ind = Json::parse(R"({"runs": 30, "acf": {"a1_values": [0.14], "steps": 3000}})");
  check_identical(run_command(request("independence", "fig12", small_ind, 1)),
                  run_command(request("independence", "fig12", small_ind, 2)));
}

TEST_CASE("written outputs are byte identical across reruns") {
  const auto root = std::filesystem::temp_directory_path() / "chaos_market_test_cli";
  std::filesystem::remove_all(root);
  const Json user = Json::parse(R"({"runs": 20, "horizon": 40})");
  const auto r1 = request("lyapunov", "fig7", user, 1);
  const auto r2 = request("lyapunov", "fig7", user, 2);
  write_outputs(root / "a", r1, run_command(r1));
  write_outputs(root / "b", r2, run_command(r2));
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(root / "a")) {
    ++files;
    CHECK(entry.path().extension() != ".tmp");
    CHECK(slurp(entry.path()) == slurp(root / "b" / entry.path().filename()));
  }
  CHECK(files >= 5);
  const Json m = Json::parse(slurp(root / "a" / "manifest.json"));
  CHECK(m["figure"] == "Fig. 7");
  CHECK(m["seed"] == 17);
  CHECK_FALSE(m.contains("threads"));
  CHECK(m["config"]["runs"] == 20);
  std::filesystem::remove_all(root);
}

TEST_CASE("simulate command") {
  const auto r = run_command(request("simulate", "fig2", Json::object(), 1));
  REQUIRE(r.files.size() == 3);
  CHECK(r.files[0].name == "trajectory_a1_0.049.csv");
  CHECK(r.files[0].contents.rfind("t,price,log_price,return\n", 0) == 0);
  const auto& runs = r.summary["runs"];
  CHECK(runs[0]["regime"] == "convergent");
  CHECK(runs[1]["regime"] == "chaotic");
  CHECK(runs[2]["regime"] == "oscillating");
}

TEST_CASE("sweep edge cases") {
  const auto single = run_command(request("sweep", "", Json::parse(R"({"a1_grid": [0.26]})"), 1));
  CHECK(single.summary["points"] == 1);
  CHECK(single.summary["sequence"].size() == 1);
  CHECK_THROWS_AS(run_command(request("sweep", "", Json::parse(R"({"a1_grid": []})"), 1)), ParameterError);
  CHECK_THROWS_AS(run_command(request("sweep", "", Json::parse(R"({"kind": "nope"})"), 1)), UsageError);
}

TEST_CASE("lyapunov without growth fails") {
  const Json flat = Json::parse(R"({"a1_values": [0.02], "v0_values": [1e-5]})");
  CHECK_THROWS_AS(run_command(request("lyapunov", "", flat, 1)), NumericError);
  const auto cand = run_command(request("lyapunov", "figA1", Json::object(), 1));
  REQUIRE(cand.files.size() == 1);
  CHECK(cand.files[0].name == "candidates.csv");
}

TEST_CASE("independence needs two runs") {
  CHECK_THROWS_AS(run_command(request("independence", "", Json::parse(R"({"runs": 1})"), 1)), ParameterError);
}

TEST_CASE("distribution command") {
  const Json osc = Json::parse(R"({"model": {"a1": 0.39}, "steps": 5000})");
  const auto r = run_command(request("distribution", "fig16", osc, 1));
  CHECK(r.summary["max_abs_return"].get<double>() == doctest::Approx(0.078).epsilon(1e-6));
  const Json still = Json::parse(R"({"shock": {"r0": 0.0}, "steps": 3000})");
  const auto z = run_command(request("distribution", "", still, 1));
  CHECK(z.summary["degenerate"] == true);
  CHECK(z.summary["excess_kurtosis"].is_null());
  CHECK(z.summary["fat_tailed"] == false);
}

TEST_CASE("equilibrium command") {
  const Json zero = Json::parse(R"({"a1_values": [0.0], "w_values": [0.01], "n_values": [5], "p_star_values": [10]})");
  const auto r = run_command(request("equilibrium", "", zero, 1));
  CHECK(r.summary["unstable"] == 0);
  CHECK(r.summary["not_unstable"][0]["max_modulus"].get<double>() == doctest::Approx(1.0));
  const auto& limits = r.files[3];
  CHECK(limits.name == "linear_limits.csv");
  CHECK(limits.contents.find("0.5,10.202013400267") != std::string::npos);
}
