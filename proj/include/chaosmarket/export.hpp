#pragma once

#include <ostream>
#include <string_view>

#include <json.hpp>

#include "chaosmarket/chaos_metrics.hpp"
#include "chaosmarket/equilibrium.hpp"
#include "chaosmarket/monte_carlo.hpp"
#include "chaosmarket/price_engine.hpp"

namespace chaosmarket {

using Json = nlohmann::json;

/// Columns t, price, log_price, return.  Row t = 0 carries the shock r0.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// Columns t, <value_column>, runs.
void write_curve_csv(std::ostream& out, const EnsembleCurve& curve, std::string_view value_column);

Json to_json(const ModelParams& params);
Json to_json(const ShockSpec& shock);
Json to_json(const InstabilityCertificate& cert);
Json to_json(const ZoneMap& map);
Json to_json(const LyapunovFit& fit);
Json to_json(const LyapunovCandidates& candidates);
Json to_json(const IndependenceReport& report);
Json ensemble_metadata(const EnsembleConfig& config, const Ensemble& ensemble);

ModelParams model_params_from_json(const Json& j, ModelParams defaults = {});

}  // namespace chaosmarket
