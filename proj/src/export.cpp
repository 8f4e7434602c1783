#include "chaosmarket/export.hpp"

#include "chaosmarket/csv.hpp"

namespace chaosmarket {

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  CsvWriter csv(out);
  csv.header({"t", "price", "log_price", "return"});
  const auto& lp = trajectory.log_prices;
  for (std::size_t t = 0; t < lp.size(); ++t) {
    const double r = t == 0 ? trajectory.shock.r0 : lp[t] - lp[t - 1];
    csv.cell(static_cast<long long>(t)).cell(std::exp(lp[t])).cell(lp[t]).cell(r);
    csv.end_row();
  }
}

void write_curve_csv(std::ostream& out, const EnsembleCurve& curve, std::string_view value_column) {
  CsvWriter csv(out);
  csv.header({"t", value_column, "runs"});
  for (std::size_t i = 0; i < curve.size(); ++i) {
    csv.cell(static_cast<long long>(i + 1)).cell(curve.values[i]).cell(static_cast<long long>(curve.counts[i]));
    csv.end_row();
  }
}

Json to_json(const ModelParams& params) {
  return Json{{"m", params.m}, {"n", params.n}, {"w", params.w}, {"a1", params.a1}};
}

Json to_json(const ShockSpec& shock) { return Json{{"p_star", shock.p_star}, {"r0", shock.r0}}; }

Json to_json(const InstabilityCertificate& cert) {
  Json params = to_json(cert.params);
  params["p_star"] = cert.p_star;
  return Json{{"params", params},
              {"max_modulus", cert.max_modulus},
              {"transverse_max_modulus", cert.transverse_max_modulus},
              {"unstable", cert.unstable}};
}

Json to_json(const ZoneMap& map) {
  Json points = Json::array();
  for (const auto& p : map.points) {
    points.push_back({{"a1", p.a1}, {"regime", to_string(p.regime)}, {"steps", p.steps}});
  }
  Json zones = Json::array();
  for (const auto& z : map.zones) {
    zones.push_back({{"regime", to_string(z.regime)},
                     {"a1_first", z.a1_first},
                     {"a1_last", z.a1_last},
                     {"first_index", z.first_index},
                     {"last_index", z.last_index}});
  }
  return Json{{"points", points}, {"zones", zones}};
}

Json to_json(const LyapunovFit& fit) {
  return Json{{"exponent", fit.exponent},
              {"intercept", fit.intercept},
              {"window", {fit.t_start, fit.t_end}},
              {"fit_quality", fit.fit_quality}};
}

Json to_json(const LyapunovCandidates& c) { return Json{{"L1", c.l1}, {"L2", c.l2}, {"L3", c.l3}}; }

Json to_json(const IndependenceReport& report) {
  return Json{{"I", report.distance},
              {"v_inf", report.v_inf},
              {"N1", report.n1},
              {"N2", report.n2},
              {"d_curve", report.d_curve}};
}

Json ensemble_metadata(const EnsembleConfig& config, const Ensemble& ensemble) {
  int excluded = 0;
  for (const auto& t : ensemble.trajectories) excluded += t.diverged() ? 1 : 0;
  return Json{{"seed", config.seed},
              {"params", to_json(config.params)},
              {"p_star", config.p_star},
              {"v0", config.v0},
              {"S", config.runs},
              {"horizon", config.horizon},
              {"exclusions", excluded}};
}

ModelParams model_params_from_json(const Json& j, ModelParams defaults) {
  ModelParams p = defaults;
  if (j.contains("m")) p.m = j.at("m").get<int>();
  if (j.contains("n")) p.n = j.at("n").get<int>();
  if (j.contains("w")) p.w = j.at("w").get<double>();
  if (j.contains("a1")) p.a1 = j.at("a1").get<double>();
  p.validate();
  return p;
}

}  // namespace chaosmarket
