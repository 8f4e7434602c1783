#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "chaosmarket/fuzzy_demand.hpp"

namespace chaosmarket {

/// The four free parameters of the price map.
struct ModelParams {
  int m = 1;     // short moving-average length
  int n = 5;     // long moving-average length
  double w = 0.01;
  double a1 = 0.17;

  /// Throws ParameterError unless 1 <= m < n, w > 0 and a1 finite.
  void validate() const;
  DemandShape shape() const { return DemandShape(w, a1); }
};

/**
 * Window of the last n prices, oldest first.  Stored as log-prices; the map
 * is additive in logs and long divergent runs would otherwise overflow.
 */
class PriceState {
 public:
  /// Throws InputError on empty windows or non-positive / non-finite prices.
  static PriceState from_prices(std::span<const double> prices);
  static PriceState from_log_prices(std::vector<double> log_prices);
  static PriceState constant(int n, double price);

  std::size_t size() const { return log_prices_.size(); }
  std::span<const double> log_prices() const { return log_prices_; }
  std::vector<double> prices() const;
  double last_log_price() const { return log_prices_.back(); }

  /// Drop the oldest entry and append a new most-recent log-price.
  void push(double log_price);

  bool operator==(const PriceState&) const = default;

 private:
  explicit PriceState(std::vector<double> log_prices) : log_prices_(std::move(log_prices)) {}
  std::vector<double> log_prices_;
};

/// Initial equilibrium price and the log-return disturbance applied at t = 0.
struct ShockSpec {
  double p_star = 10.0;
  double r0 = 0.0;

  /// Shock given as a simple return: p_0 = p_star * (1 + jump).
  static ShockSpec from_simple_return(double p_star, double jump);
  void validate() const;
};

struct SimulationOptions {
  /// Halt once |ln(p_t / p_star)| exceeds this bound.
  double divergence_log_bound = std::log(1e6);
};

/// Price path p_0 ... p_T (stored as logs) generated from a shock.
struct Trajectory {
  ModelParams params;
  ShockSpec shock;
  std::vector<double> log_prices;
  /// Step at which the divergence guard fired; the offending price is the
  /// last entry of log_prices.
  std::optional<int> divergence_step;

  bool diverged() const { return divergence_step.has_value(); }
  std::vector<double> prices() const;
};

/// Mean of the most recent `length` entries of a price window.
double moving_average(std::span<const double> window, int length);

/// ln(mean of last m) - ln(mean of all n) for a window of exactly n prices.
double log_ratio_x(const PriceState& state, int m, int n);

/// Log-return produced by one application of the map: a1 * ed1(x).
double next_return(const PriceState& state, const ModelParams& params);

/// One iteration of the map: shift the window and append y_n * exp(a1 ed1(x)).
PriceState step(const PriceState& state, const ModelParams& params);

/// Initial window: n-1 entries at p_star followed by p_star * exp(r0).
PriceState initial_state(const ModelParams& params, const ShockSpec& shock);

/// Iterate the map `horizon` times from the shocked initial window.
Trajectory simulate(const ModelParams& params, const ShockSpec& shock, int horizon,
                    const SimulationOptions& options = {});

/// r_t = ln p_t - ln p_{t-1}, t = 1 ... T.
std::vector<double> returns(std::span<const double> log_prices);
std::vector<double> returns(const Trajectory& trajectory);

}  // namespace chaosmarket
