#pragma once

#include <cstdint>
#include <vector>

#include "chaosmarket/price_engine.hpp"

namespace chaosmarket {

/// Seeded ensemble of price-map runs with Gaussian shocks r0 = v0 * eps.
struct EnsembleConfig {
  ModelParams params;
  double p_star = 10.0;
  double v0 = 1e-5;
  int runs = 600;
  int horizon = 100;
  std::uint64_t seed = 0;
  SimulationOptions simulation;

  void validate() const;
};

struct Ensemble {
  std::uint64_t seed = 0;
  /// Run j was driven by substream j of the seed.  Random-walk ensembles
  /// leave Trajectory::params at its default; it does not describe them.
  std::vector<Trajectory> trajectories;
};

/**
 * Per-time ensemble statistic for t = 1 ... T (values[t - 1]).
 * Runs that tripped the divergence guard are left out at and after their
 * divergence step; `counts` is the number of runs used at each t.
 */
struct EnsembleCurve {
  std::vector<double> values;
  std::vector<int> counts;
  int excluded_runs = 0;

  std::size_t size() const { return values.size(); }
  double at(int t) const { return values.at(static_cast<std::size_t>(t - 1)); }
};

using VolatilityCurve = EnsembleCurve;
using DriftCurve = EnsembleCurve;

/// Shock for run `index`: v0 times the first Gaussian of substream `index`.
double ensemble_shock(std::uint64_t seed, std::uint64_t index, double v0);

Ensemble run_ensemble(const EnsembleConfig& config, int threads = 1);

/// v(t) = sqrt(mean_j (ln p_t^j - ln p_{t-1}^j)^2), zero-mean convention.
VolatilityCurve volatility_curve(const Ensemble& ensemble);

/// d(t) = sqrt(mean_j (ln p_t^j - ln p_0^j)^2).
DriftCurve drift_curve(const Ensemble& ensemble);

struct RandomWalkConfig {
  double sigma = 0.03;
  double sigma0 = 1e-5;
  double p_star = 10.0;
  int runs = 100;
  int horizon = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

/// ln p_0 = ln p* + sigma0 eps_0, then ln p_{t+1} = ln p_t + sigma eps_{t+1}.
Ensemble random_walk_ensemble(const RandomWalkConfig& config, int threads = 1);

struct ConvergedVolatility {
  double value = 0.0;
  /// Set when the tail drifts by more than 10% of its mean and the slope is
  /// more than three standard errors from zero.
  bool still_trending = false;
};

/// Mean of the final tail_fraction of the curve.
ConvergedVolatility converged_volatility(const VolatilityCurve& curve, double tail_fraction = 0.25);

}  // namespace chaosmarket
