#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chaosmarket/chaos_metrics.hpp"
#include "chaosmarket/csv.hpp"
#include "chaosmarket/distribution.hpp"
#include "chaosmarket/equilibrium.hpp"
#include "chaosmarket/error.hpp"
#include "chaosmarket/monte_carlo.hpp"

namespace chaosmarket::cli {
namespace {

std::vector<double> numbers(const Json& j) { return j.get<std::vector<double>>(); }

SimulationOptions simulation_options(const Json& config) {
  SimulationOptions o;
  if (config.contains("divergence_log_bound")) o.divergence_log_bound = config["divergence_log_bound"].get<double>();
  return o;
}

RegimeCriteria criteria(const Json& config) {
  RegimeCriteria c;
  c.horizon = config.at("classify_horizon").get<int>();
  return c;
}

Json optional_step(const std::optional<int>& step) { return step ? Json(*step) : Json(nullptr); }

double tail_mean(std::span<const double> values, std::size_t count) {
  const auto tail = values.last(std::min(count, values.size()));
  double s = 0.0;
  for (double v : tail) s += v;
  return s / static_cast<double>(tail.size());
}

template <typename Fn>
OutputFile csv_file(std::string name, Fn&& fill) {
  std::ostringstream out;
  CsvWriter w(out);
  fill(w);
  return {std::move(name), out.str()};
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// --- sweep helpers ---------------------------------------------------------

struct SweepPoint {
  double a1;
  double w;
};

EnsembleConfig ensemble_config(const Json& block, const ModelParams& params, double p_star, std::uint64_t seed) {
  EnsembleConfig c;
  c.params = params;
  c.p_star = p_star;
  c.runs = block.at("runs").get<int>();
  c.horizon = block.at("horizon").get<int>();
  c.v0 = block.at("v0").get<double>();
  c.seed = seed;
  return c;
}

std::vector<std::vector<SweepPoint>> sweep_curves(const Json& config, bool over_a1) {
  std::vector<std::vector<SweepPoint>> curves;
  if (over_a1) {
    const auto grid = grid_values(config.at("a1_grid"), "a1_grid");
    for (double w : numbers(config.at("w_values"))) {
      auto& c = curves.emplace_back();
      for (double a1 : grid) c.push_back({a1, w});
    }
  } else {
    const auto grid = grid_values(config.at("w_grid"), "w_grid");
    for (double a1 : numbers(config.at("a1_values"))) {
      auto& c = curves.emplace_back();
      for (double w : grid) c.push_back({a1, w});
    }
  }
  if (curves.empty()) throw ParameterError("sweep: no curves requested");
  return curves;
}

CommandResult sweep_zones(const Json& config, int threads) {
  const auto base = model_params_from_json(config.at("model"));
  const double p_star = config.at("p_star").get<double>();
  const auto shock = shock_from_json(config.at("shock"), p_star);
  const auto grid = grid_values(config.at("a1_grid"), "a1_grid");
  const auto map = sweep_regimes(grid, base, shock, criteria(config), threads);

  CommandResult result;
  result.files.push_back(csv_file("zones.csv", [&](CsvWriter& w) {
    w.header({"a1", "regime", "steps"});
    for (const auto& p : map.points) w.cell(p.a1).cell(to_string(p.regime)).cell(static_cast<long long>(p.steps)).end_row();
  }));
  const Json zones = to_json(map);
  result.files.push_back({"zones.json", zones.dump(2) + "\n"});
  Json labels = Json::array();
  for (const auto& z : map.zones) labels.push_back(to_string(z.regime));
  result.summary = {{"kind", "zones"}, {"points", map.points.size()}, {"zones", zones["zones"]}, {"sequence", labels}};
  return result;
}

CommandResult sweep_volatility(const Json& config, std::uint64_t seed, int threads, bool over_a1) {
  const auto base = model_params_from_json(config.at("model"));
  const double p_star = config.at("p_star").get<double>();
  const auto shock = shock_from_json(config.at("shock"), p_star);
  const Json& ens = config.at("ensemble");
  const double tail = ens.at("tail_fraction").get<double>();
  const auto crit = criteria(config);

  Json rows = Json::array();
  std::ostringstream out;
  CsvWriter w(out);
  w.header({"a1", "w", "v_inf", "still_trending", "excluded_runs", "formula_v_inf", "oscillation_law", "regime"});
  for (const auto& curve : sweep_curves(config, over_a1)) {
    for (const auto& pt : curve) {
      ModelParams p = base;
      p.a1 = pt.a1;
      p.w = pt.w;
      const auto ensemble = run_ensemble(ensemble_config(ens, p, p_star, seed), threads);
      const auto v = volatility_curve(ensemble);
      const auto conv = converged_volatility(v, tail);
      const auto regime = classify_params(p, shock, crit).regime;
      const double formula = v_infinity_formula(pt.a1, pt.w);
      w.cell(pt.a1).cell(pt.w).cell(conv.value).cell(conv.still_trending ? "true" : "false")
          .cell(static_cast<long long>(v.excluded_runs)).cell(formula).cell(0.2 * pt.a1).cell(to_string(regime))
          .end_row();
      rows.push_back({{"a1", pt.a1}, {"w", pt.w}, {"v_inf", conv.value}, {"regime", to_string(regime)},
                      {"excluded_runs", v.excluded_runs}});
    }
  }
  const std::string name = over_a1 ? "v_inf_a1" : "v_inf_w";
  CommandResult result;
  result.files.push_back({name + ".csv", out.str()});
  result.summary = {{"kind", name}, {"points", rows}};
  return result;
}

CommandResult sweep_independence(const Json& config, std::uint64_t seed, int threads, bool over_a1) {
  const auto base = model_params_from_json(config.at("model"));
  const double p_star = config.at("p_star").get<double>();
  const Json& ens = config.at("ensemble");
  const double tail = ens.at("tail_fraction").get<double>();
  const int n1 = config.at("independence").at("n1").get<int>();
  const int n2 = config.at("independence").at("n2").get<int>();

  std::ostringstream out;
  CsvWriter w(out);
  w.header({"a1", "w", "I", "v_inf", "excluded_runs", "locus_a1"});
  Json curves = Json::array();
  for (const auto& curve : sweep_curves(config, over_a1)) {
    std::vector<double> xs, is;
    for (const auto& pt : curve) {
      ModelParams p = base;
      p.a1 = pt.a1;
      p.w = pt.w;
      const auto ensemble = run_ensemble(ensemble_config(ens, p, p_star, seed), threads);
      const double v_inf = converged_volatility(volatility_curve(ensemble), tail).value;
      const auto d = drift_curve(ensemble);
      const double dist = distance_to_independence(d.values, v_inf, n1, n2);
      w.cell(pt.a1).cell(pt.w).cell(dist).cell(v_inf).cell(static_cast<long long>(d.excluded_runs))
          .cell(independence_locus(pt.w)).end_row();
      xs.push_back(over_a1 ? pt.a1 : pt.w);
      is.push_back(dist);
    }
    const auto& first = curve.front();
    Json c = {{"I", is}, {"zero_crossings", zero_crossings(xs, is)}};
    if (over_a1) {
      c["w"] = first.w;
      c["a1"] = xs;
      c["locus_a1"] = independence_locus(first.w);
    } else {
      c["a1"] = first.a1;
      c["w"] = xs;
      c["locus_w"] = first.a1 / independence_locus(1.0);
    }
    curves.push_back(std::move(c));
  }
  const std::string name = over_a1 ? "independence_a1" : "independence_w";
  CommandResult result;
  result.files.push_back({name + ".csv", out.str()});
  result.summary = {{"kind", name}, {"N1", n1}, {"N2", n2}, {"curves", curves}};
  return result;
}

}  // namespace

CommandResult cmd_simulate(const Json& config) {
  auto params = model_params_from_json(config.at("model"));
  const double p_star = config.at("p_star").get<double>();
  const auto shock = shock_from_json(config.at("shock"), p_star);
  const int horizon = config.at("horizon").get<int>();
  const auto options = simulation_options(config);
  auto crit = criteria(config);
  crit.horizon = std::max(crit.horizon, horizon);

  CommandResult result;
  Json runs = Json::array();
  for (double a1 : numbers(config.at("a1_values"))) {
    params.a1 = a1;
    params.validate();
    const auto traj = simulate(params, shock, horizon, options);
    const auto cls = classify_params(params, shock, crit, options);
    const auto prices = traj.prices();
    std::ostringstream out;
    write_trajectory_csv(out, traj);
    result.files.push_back({"trajectory_a1_" + format_number(a1) + ".csv", out.str()});
    runs.push_back({{"a1", a1},
                    {"regime", to_string(cls.regime)},
                    {"classified_steps", cls.steps},
                    {"final_price", prices.back()},
                    {"center_price", tail_mean(prices, 100)},
                    {"diverged", traj.diverged()},
                    {"divergence_step", optional_step(traj.divergence_step)},
                    {"steps", prices.size() - 1}});
  }
  result.summary = {{"model", to_json(params)}, {"shock", to_json(shock)}, {"runs", runs}};
  result.summary["model"].erase("a1");
  return result;
}

CommandResult cmd_sweep(const Json& config, std::uint64_t seed, int threads) {
  const auto kind = config.at("kind").get<std::string>();
  if (kind == "zones") return sweep_zones(config, threads);
  if (kind == "v_inf_a1") return sweep_volatility(config, seed, threads, true);
  if (kind == "v_inf_w") return sweep_volatility(config, seed, threads, false);
  if (kind == "independence_a1") return sweep_independence(config, seed, threads, true);
  if (kind == "independence_w") return sweep_independence(config, seed, threads, false);
  throw UsageError("sweep: unknown kind '" + kind + "'");
}

CommandResult cmd_lyapunov(const Json& config, std::uint64_t seed, int threads) {
  auto params = model_params_from_json(config.at("model"));
  const double p_star = config.at("p_star").get<double>();
  const int runs = config.at("runs").get<int>();
  const int horizon = config.at("horizon").get<int>();
  const bool with_returns = config.at("write_returns").get<bool>();

  CommandResult result;
  std::ostringstream vol_out, ret_out;
  CsvWriter vol(vol_out), ret(ret_out);
  vol.header({"a1", "v0", "t", "v", "ln_v", "runs"});
  ret.header({"a1", "v0", "run", "t", "return"});
  Json fits = Json::array();
  int fitted = 0;
  std::string last_error;
  const auto a1_values = numbers(config.at("a1_values"));
  for (double a1 : a1_values) {
    params.a1 = a1;
    for (double v0 : numbers(config.at("v0_values"))) {
      EnsembleConfig ec;
      ec.params = params;
      ec.p_star = p_star;
      ec.v0 = v0;
      ec.runs = runs;
      ec.horizon = horizon;
      ec.seed = seed;
      const auto ensemble = run_ensemble(ec, threads);
      const auto curve = volatility_curve(ensemble);
      for (int t = 1; t <= static_cast<int>(curve.size()); ++t) {
        vol.cell(a1).cell(v0).cell(static_cast<long long>(t)).cell(curve.at(t)).cell(std::log(curve.at(t)))
            .cell(static_cast<long long>(curve.counts[static_cast<std::size_t>(t - 1)])).end_row();
      }
      if (with_returns) {
        for (std::size_t j = 0; j < ensemble.trajectories.size(); ++j) {
          const auto r = returns(ensemble.trajectories[j]);
          for (std::size_t t = 0; t < r.size(); ++t) {
            ret.cell(a1).cell(v0).cell(static_cast<long long>(j)).cell(static_cast<long long>(t + 1)).cell(r[t])
                .end_row();
          }
        }
      }
      const auto conv = converged_volatility(curve);
      Json entry = {{"a1", a1},
                    {"v0", v0},
                    {"v_inf", conv.value},
                    {"still_trending", conv.still_trending},
                    {"excluded_runs", curve.excluded_runs},
                    {"fit", nullptr}};
      try {
        entry["fit"] = to_json(empirical_lyapunov(curve, conv.value));
        ++fitted;
      } catch (const NumericError& e) {
        entry["fit_error"] = e.what();
        last_error = e.what();
      }
      if (params.m == 1) entry["analytic"] = to_json(lyapunov_candidates(params));
      fits.push_back(std::move(entry));
    }
  }
  if (!fits.empty() && fitted == 0) throw NumericError("no exponent could be fitted: " + last_error);
  if (!a1_values.empty()) result.files.push_back({"volatility.csv", vol_out.str()});
  if (with_returns) result.files.push_back({"returns.csv", ret_out.str()});

  if (config.at("random_walk").get<bool>()) {
    RandomWalkConfig rw;
    rw.sigma = config.at("random_walk_sigma").get<double>();
    rw.p_star = p_star;
    rw.runs = runs;
    rw.horizon = horizon;
    rw.seed = seed;
    const auto ensemble = random_walk_ensemble(rw, threads);
    result.files.push_back(csv_file("random_walk_volatility.csv", [&](CsvWriter& w) {
      w.header({"t", "v", "runs"});
      const auto curve = volatility_curve(ensemble);
      for (int t = 1; t <= static_cast<int>(curve.size()); ++t) {
        w.cell(static_cast<long long>(t)).cell(curve.at(t))
            .cell(static_cast<long long>(curve.counts[static_cast<std::size_t>(t - 1)])).end_row();
      }
    }));
    if (with_returns) {
      result.files.push_back(csv_file("random_walk_returns.csv", [&](CsvWriter& w) {
        w.header({"run", "t", "return"});
        for (std::size_t j = 0; j < ensemble.trajectories.size(); ++j) {
          const auto r = returns(ensemble.trajectories[j]);
          for (std::size_t t = 0; t < r.size(); ++t) {
            w.cell(static_cast<long long>(j)).cell(static_cast<long long>(t + 1)).cell(r[t]).end_row();
          }
        }
      }));
    }
  }

  Json candidates = Json::array();
  if (params.m == 1) {
    result.files.push_back(csv_file("candidates.csv", [&](CsvWriter& w) {
      w.header({"a1", "L1", "L2", "L3", "gap"});
      for (double a1 : grid_values(config.at("candidate_grid"), "candidate_grid")) {
        ModelParams p = params;
        p.a1 = a1;
        const auto c = lyapunov_candidates(p);
        w.cell(a1).cell(c.l1).cell(c.l2).cell(c.l3).cell(lyapunov_gap(p)).end_row();
      }
    }));
  }
  result.summary = {{"fits", fits}};
  return result;
}

CommandResult cmd_independence(const Json& config, std::uint64_t seed, int threads) {
  auto params = model_params_from_json(config.at("model"));
  const double p_star = config.at("p_star").get<double>();
  const int n1 = config.at("n1").get<int>();
  const int n2 = config.at("n2").get<int>();
  const auto source = config.at("v_inf_source").get<std::string>();
  if (source != "formula" && source != "ensemble") {
    throw UsageError("v_inf_source must be 'formula' or 'ensemble'");
  }

  CommandResult result;
  std::ostringstream drift_out;
  CsvWriter drift(drift_out);
  drift.header({"a1", "t", "d", "reference", "random_walk_d", "runs"});
  Json reports = Json::array();
  const auto a1_values = numbers(config.at("a1_values"));
  for (double a1 : a1_values) {
    params.a1 = a1;
    EnsembleConfig ec;
    ec.params = params;
    ec.p_star = p_star;
    ec.v0 = config.at("v0").get<double>();
    ec.runs = config.at("runs").get<int>();
    ec.horizon = config.at("horizon").get<int>();
    ec.seed = seed;
    const auto ensemble = run_ensemble(ec, threads);
    const auto d = drift_curve(ensemble);
    const double ensemble_v_inf = converged_volatility(volatility_curve(ensemble)).value;
    const double v_inf = source == "formula" ? v_infinity_formula(a1, params.w) : ensemble_v_inf;
    const auto report = independence_report(d, v_inf, n1, n2);

    RandomWalkConfig rw;
    rw.sigma = v_inf;
    rw.sigma0 = ec.v0;
    rw.p_star = p_star;
    rw.runs = ec.runs;
    rw.horizon = ec.horizon;
    rw.seed = seed;
    const auto rw_d = drift_curve(random_walk_ensemble(rw, threads));
    for (int t = 1; t <= static_cast<int>(d.size()); ++t) {
      drift.cell(a1).cell(static_cast<long long>(t)).cell(d.at(t)).cell(v_inf * std::sqrt(t)).cell(rw_d.at(t))
          .cell(static_cast<long long>(d.counts[static_cast<std::size_t>(t - 1)])).end_row();
    }
    reports.push_back({{"a1", a1},
                       {"I", report.distance},
                       {"v_inf", v_inf},
                       {"v_inf_source", source},
                       {"ensemble_v_inf", ensemble_v_inf},
                       {"excluded_runs", d.excluded_runs}});
  }
  if (!a1_values.empty()) result.files.push_back({"drift.csv", drift_out.str()});

  const Json& acf_cfg = config.at("acf");
  Json acf_summary = Json::array();
  const auto acf_a1 = numbers(acf_cfg.at("a1_values"));
  if (!acf_a1.empty()) {
    const auto shock = shock_from_json(acf_cfg.at("shock"), p_star);
    const auto options = simulation_options(acf_cfg);
    const int steps = acf_cfg.at("steps").get<int>();
    const auto burn_in = acf_cfg.at("burn_in").get<std::size_t>();
    const int max_lag = acf_cfg.at("max_lag").get<int>();
    std::ostringstream acf_out;
    CsvWriter w(acf_out);
    w.header({"a1", "lag", "acf", "band"});
    for (double a1 : acf_a1) {
      params.a1 = a1;
      const auto traj = simulate(params, shock, steps, options);
      if (traj.diverged()) {
        throw NumericError("autocorrelation run diverged at step " + std::to_string(*traj.divergence_step) +
                           " for a1 = " + format_number(a1));
      }
      const auto r = returns(traj);
      if (burn_in >= r.size()) throw ParameterError("acf: burn_in leaves no samples");
      const std::span<const double> kept = std::span<const double>(r).subspan(burn_in);
      const auto acf = autocorrelation(kept, max_lag);
      const double band = 2.0 / std::sqrt(static_cast<double>(kept.size()));
      for (int lag = 1; lag <= max_lag; ++lag) {
        w.cell(a1).cell(static_cast<long long>(lag)).cell(acf[static_cast<std::size_t>(lag - 1)]).cell(band).end_row();
      }
      acf_summary.push_back({{"a1", a1}, {"samples", kept.size()}, {"band", band}, {"acf", acf}});
    }
    result.files.push_back({"acf.csv", acf_out.str()});
  }
  result.summary = {{"N1", n1}, {"N2", n2}, {"reports", reports}, {"acf", acf_summary}};
  return result;
}

CommandResult cmd_distribution(const Json& config) {
  const auto params = model_params_from_json(config.at("model"));
  const double p_star = config.at("p_star").get<double>();
  const auto shock = shock_from_json(config.at("shock"), p_star);
  const int steps = config.at("steps").get<int>();
  const auto burn_in = config.at("burn_in").get<std::size_t>();
  const int bins = config.at("bins").get<int>();

  const auto traj = simulate(params, shock, steps, simulation_options(config));
  if (traj.diverged()) {
    throw NumericError("distribution run diverged at step " + std::to_string(*traj.divergence_step));
  }
  const auto r = returns(traj);
  if (burn_in >= r.size()) throw ParameterError("distribution: burn_in leaves no samples");
  const std::span<const double> kept = std::span<const double>(r).subspan(burn_in);
  const auto portrait = phase_portrait(r, burn_in);
  const auto hist = return_histogram(kept, bins);

  CommandResult result;
  double bound = 0.0;
  result.files.push_back(csv_file("attractor.csv", [&](CsvWriter& w) {
    w.header({"r_prev", "r"});
    for (const auto& [x, y] : portrait) {
      bound = std::max({bound, std::fabs(x), std::fabs(y)});
      w.cell(x).cell(y).end_row();
    }
  }));
  const auto logs = log_densities(hist.densities);
  result.files.push_back(csv_file("histogram.csv", [&](CsvWriter& w) {
    w.header({"left", "right", "centre", "density", "log_density", "gaussian"});
    for (std::size_t i = 0; i < hist.bin_count(); ++i) {
      w.cell(hist.bin_edges[i]).cell(hist.bin_edges[i + 1]).cell(hist.centre(i)).cell(hist.densities[i]).cell(logs[i]);
      if (hist.degenerate) {
        w.cell("");
      } else {
        w.cell(hist.matched_gaussian[i]);
      }
      w.end_row();
    }
  }));

  Json kurtosis = nullptr;
  Json tail_ratio = nullptr;
  if (!hist.degenerate) {
    kurtosis = excess_kurtosis(kept);
    tail_ratio = tail_mass_ratio(kept, config.at("tail_sigma").get<double>());
  }
  const double stderr_mean = std::sqrt(hist.sample_variance / static_cast<double>(kept.size()));
  result.summary = {{"a1", params.a1},
                    {"samples", kept.size()},
                    {"burn_in", burn_in},
                    {"bins", bins},
                    {"degenerate", hist.degenerate},
                    {"mean", hist.sample_mean},
                    {"mean_stderr", stderr_mean},
                    {"symmetric", std::fabs(hist.sample_mean) <= 3.0 * stderr_mean},
                    {"variance", hist.sample_variance},
                    {"excess_kurtosis", kurtosis},
                    {"fat_tailed", !hist.degenerate && kurtosis.get<double>() > 0.0},
                    {"tail_mass_ratio", tail_ratio},
                    {"max_abs_return", bound},
                    {"within_return_map_range", bound <= 0.4 * params.a1 + 1e-12}};
  return result;
}

CommandResult cmd_equilibrium(const Json& config) {
  const int m = config.at("m").get<int>();
  const auto a1s = grid_values(config.at("a1_values"), "a1_values");
  const auto ws = grid_values(config.at("w_values"), "w_values");
  const auto ns = config.at("n_values").get<std::vector<int>>();
  const auto p_stars = grid_values(config.at("p_star_values"), "p_star_values");

  CommandResult result;
  std::ostringstream cert_out, jac_out;
  CsvWriter cert(cert_out), jac(jac_out);
  cert.header({"a1", "w", "n", "p_star", "max_modulus", "unstable", "fixed_point"});
  jac.header({"a1", "w", "n", "p_star", "fd_bottom_right", "chain_rule_bottom_right", "scaled_bottom_right",
              "max_rel_error"});
  Json certificates = Json::array();
  Json marginal = Json::array();
  int unstable = 0;
  int fixed_points = 0;
  double worst = 0.0;
  for (int n : ns) {
    for (double w : ws) {
      for (double a1 : a1s) {
        const ModelParams p{m, n, w, a1};
        p.validate();
        const auto row = chain_rule_bottom_row(p);
        for (double p_star : p_stars) {
          const auto c = instability_certificate(p, p_star);
          const bool fixed = is_equilibrium(PriceState::constant(n, p_star), p, 0.0);
          const auto fd = jacobian_fd(p, p_star, 1e-6 * p_star);
          double err = 0.0;
          for (int i = 0; i < n; ++i) {
            const double diff = std::fabs(fd.jacobian(n - 1, i) - row(i));
            err = std::max(err, row(i) != 0.0 ? diff / std::fabs(row(i)) : diff);
          }
          worst = std::max(worst, err);
          unstable += c.unstable ? 1 : 0;
          fixed_points += fixed ? 1 : 0;
          cert.cell(a1).cell(w).cell(static_cast<long long>(n)).cell(p_star).cell(c.max_modulus)
              .cell(c.unstable ? "true" : "false").cell(fixed ? "true" : "false").end_row();
          jac.cell(a1).cell(w).cell(static_cast<long long>(n)).cell(p_star).cell(fd.jacobian(n - 1, n - 1))
              .cell(row(n - 1)).cell(scaled_bottom_right(p, p_star)).cell(err).end_row();
          certificates.push_back(to_json(c));
          if (!c.unstable) marginal.push_back(to_json(c));
        }
      }
    }
  }
  result.files.push_back({"certificates.csv", cert_out.str()});
  result.files.push_back({"jacobian_check.csv", jac_out.str()});

  const Json& lin = config.at("linear_model");
  const double lp_star = lin.at("p_star").get<double>();
  const double r0 = lin.at("r0").get<double>();
  const int horizon = lin.at("horizon").get<int>();
  std::ostringstream path_out, limit_out;
  CsvWriter path(path_out), limit(limit_out);
  path.header({"a", "t", "price"});
  limit.header({"a", "final_price", "closed_form", "behavior"});
  for (double a : numbers(lin.at("a_values"))) {
    const auto lm = linear_model_simulate(a, lp_star, r0, horizon);
    for (std::size_t t = 0; t < lm.log_prices.size(); ++t) {
      path.cell(a).cell(static_cast<long long>(t)).cell(std::exp(lm.log_prices[t])).end_row();
    }
    const double closed = std::fabs(a) < 1.0 ? linear_model_limit(a, lp_star, r0) : std::nan("");
    const char* behavior = lm.behavior == LinearModelBehavior::convergent  ? "convergent"
                           : lm.behavior == LinearModelBehavior::divergent ? "divergent"
                                                                           : "oscillatory";
    limit.cell(a).cell(std::exp(lm.log_prices.back())).cell(closed).cell(behavior).end_row();
  }
  result.files.push_back({"linear_model.csv", path_out.str()});
  result.files.push_back({"linear_limits.csv", limit_out.str()});

  const auto points = certificates.size();
  result.summary = {{"points", points},
                    {"unstable", unstable},
                    {"all_unstable", unstable == static_cast<int>(points)},
                    {"fixed_points", fixed_points},
                    {"max_row_rel_error", worst},
                    {"not_unstable", marginal},
                    {"unit_circle_tolerance", kUnitCircleTolerance}};
  return result;
}

CommandResult run_command(const RunRequest& request) {
  const auto& c = request.config;
  if (request.command == "simulate") return cmd_simulate(c);
  if (request.command == "sweep") return cmd_sweep(c, request.seed, request.threads);
  if (request.command == "lyapunov") return cmd_lyapunov(c, request.seed, request.threads);
  if (request.command == "independence") return cmd_independence(c, request.seed, request.threads);
  if (request.command == "distribution") return cmd_distribution(c);
  if (request.command == "equilibrium") return cmd_equilibrium(c);
  throw UsageError("unknown command '" + request.command + "'");
}

Json manifest(const RunRequest& request, const CommandResult& result) {
  Json files = Json::array();
  for (const auto& f : result.files) files.push_back(f.name);
  files.push_back("summary.json");
  const Preset* preset = request.preset.empty() ? nullptr : find_preset(request.preset);
  return {{"command", request.command},
          {"preset", preset ? Json(preset->name) : Json(nullptr)},
          {"figure", preset ? Json(preset->figure) : Json(nullptr)},
          {"seed", request.seed},
          {"config", request.config},
          {"files", files}};
}

void write_outputs(const std::filesystem::path& dir, const RunRequest& request, const CommandResult& result) {
  std::filesystem::create_directories(dir);
  for (const auto& f : result.files) write_atomic(dir / f.name, f.contents);
  write_atomic(dir / "summary.json", result.summary.dump(2) + "\n");
  write_atomic(dir / "manifest.json", manifest(request, result).dump(2) + "\n");
}

}  // namespace chaosmarket::cli
