#include "chaosmarket/monte_carlo.hpp"

#include <algorithm>
#include <cmath>

#include "chaosmarket/error.hpp"
#include "chaosmarket/parallel.hpp"
#include "chaosmarket/rng.hpp"

namespace chaosmarket {

namespace {

// Number of returns of a run usable in statistics: r_1 ... r_k with k
// excluding the divergence step itself.
std::size_t usable_returns(const Trajectory& traj) {
  const std::size_t available = traj.log_prices.size() - 1;
  return traj.diverged() ? available - 1 : available;
}

template <typename Term>
EnsembleCurve reduce_runs(const Ensemble& ensemble, Term&& term) {
  if (ensemble.trajectories.size() < 2) {
    throw ParameterError("ensemble statistics need at least two runs");
  }
  std::size_t horizon = 0;
  for (const auto& traj : ensemble.trajectories) {
    horizon = std::max(horizon, traj.log_prices.size() - 1);
  }
  EnsembleCurve curve;
  curve.values.assign(horizon, 0.0);
  curve.counts.assign(horizon, 0);
  for (const auto& traj : ensemble.trajectories) {
    if (traj.diverged()) ++curve.excluded_runs;
    const std::size_t usable = usable_returns(traj);
    for (std::size_t t = 1; t <= usable; ++t) {
      const double v = term(traj.log_prices, t);
      curve.values[t - 1] += v * v;
      ++curve.counts[t - 1];
    }
  }
  for (std::size_t i = 0; i < horizon; ++i) {
    curve.values[i] = curve.counts[i] > 0 ? std::sqrt(curve.values[i] / curve.counts[i]) : 0.0;
  }
  return curve;
}

}  // namespace

void EnsembleConfig::validate() const {
  params.validate();
  if (!(p_star > 0.0)) throw ParameterError("EnsembleConfig: p_star must be positive");
  if (!(v0 >= 0.0) || !std::isfinite(v0)) throw ParameterError("EnsembleConfig: v0 must be >= 0");
  if (runs < 2) throw ParameterError("EnsembleConfig: need at least two runs");
  if (horizon < 2) throw ParameterError("EnsembleConfig: horizon must be >= 2");
}

void RandomWalkConfig::validate() const {
  if (!(sigma >= 0.0) || !(sigma0 >= 0.0)) throw ParameterError("RandomWalkConfig: sigmas must be >= 0");
  if (!(p_star > 0.0)) throw ParameterError("RandomWalkConfig: p_star must be positive");
  if (runs < 2) throw ParameterError("RandomWalkConfig: need at least two runs");
  if (horizon < 2) throw ParameterError("RandomWalkConfig: horizon must be >= 2");
}

double ensemble_shock(std::uint64_t seed, std::uint64_t index, double v0) {
  RandomStream stream(seed, index);
  return v0 * stream.gaussian();
}

Ensemble run_ensemble(const EnsembleConfig& config, int threads) {
  config.validate();
  Ensemble ensemble{config.seed, std::vector<Trajectory>(static_cast<std::size_t>(config.runs))};
  parallel_for(ensemble.trajectories.size(), threads, [&](std::size_t j) {
    const ShockSpec shock{config.p_star, ensemble_shock(config.seed, j, config.v0)};
    ensemble.trajectories[j] = simulate(config.params, shock, config.horizon, config.simulation);
  });
  return ensemble;
}

VolatilityCurve volatility_curve(const Ensemble& ensemble) {
  return reduce_runs(ensemble, [](const std::vector<double>& lp, std::size_t t) {
    return lp[t] - lp[t - 1];
  });
}

DriftCurve drift_curve(const Ensemble& ensemble) {
  return reduce_runs(ensemble, [](const std::vector<double>& lp, std::size_t t) {
    return lp[t] - lp[0];
  });
}

Ensemble random_walk_ensemble(const RandomWalkConfig& config, int threads) {
  config.validate();
  Ensemble ensemble{config.seed, std::vector<Trajectory>(static_cast<std::size_t>(config.runs))};
  const double log_star = std::log(config.p_star);
  parallel_for(ensemble.trajectories.size(), threads, [&](std::size_t j) {
    RandomStream stream(config.seed, j);
    Trajectory traj;
    traj.shock = ShockSpec{config.p_star, config.sigma0 * stream.gaussian()};
    traj.log_prices.reserve(static_cast<std::size_t>(config.horizon) + 1);
    traj.log_prices.push_back(log_star + traj.shock.r0);
    for (int t = 1; t <= config.horizon; ++t) {
      traj.log_prices.push_back(traj.log_prices.back() + config.sigma * stream.gaussian());
    }
    ensemble.trajectories[j] = std::move(traj);
  });
  return ensemble;
}

ConvergedVolatility converged_volatility(const VolatilityCurve& curve, double tail_fraction) {
  if (curve.size() < 20) throw ParameterError("converged_volatility: curve needs >= 20 points");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ParameterError("converged_volatility: tail_fraction must be in (0, 1]");
  }
  const auto len = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(tail_fraction * static_cast<double>(curve.size()))));
  const std::span<const double> tail = std::span<const double>(curve.values).last(len);

  double mean = 0.0;
  for (double v : tail) mean += v;
  mean /= static_cast<double>(len);

  // least-squares slope against index
  const double centre = (static_cast<double>(len) - 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double dx = static_cast<double>(i) - centre;
    sxy += dx * (tail[i] - mean);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double resid = tail[i] - mean - slope * (static_cast<double>(i) - centre);
    sse += resid * resid;
  }
  const double se = len > 2 ? std::sqrt(sse / static_cast<double>(len - 2) / sxx) : 0.0;
  const double drift = std::fabs(slope) * static_cast<double>(len);
  const bool significant = std::fabs(slope) > 3.0 * se;
  return {mean, significant && (mean > 0.0 ? drift > 0.1 * mean : drift > 0.0)};
}

}  // namespace chaosmarket
