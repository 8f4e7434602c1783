#include "chaosmarket/price_engine.hpp"

#include <algorithm>
#include <string>

#include "chaosmarket/error.hpp"

namespace chaosmarket {

namespace {

// ln of the mean of exp(logs), shifted by `ref` for range safety.
double log_mean_exp(std::span<const double> logs, double ref) {
  double sum = 0.0;
  for (double v : logs) sum += std::exp(v - ref);
  return ref + std::log(sum / static_cast<double>(logs.size()));
}

double log_ratio_from_logs(std::span<const double> logs, int m) {
  const double ref = logs.back();
  const double short_avg = log_mean_exp(logs.subspan(logs.size() - static_cast<std::size_t>(m)), ref);
  const double long_avg = log_mean_exp(logs, ref);
  return short_avg - long_avg;
}

}  // namespace

void ModelParams::validate() const {
  if (m < 1 || n <= m) {
    throw ParameterError("ModelParams: need 1 <= m < n, got m=" + std::to_string(m) +
                         " n=" + std::to_string(n));
  }
  if (!(w > 0.0) || !std::isfinite(w)) throw ParameterError("ModelParams: w must be positive");
  if (!std::isfinite(a1)) throw ParameterError("ModelParams: a1 must be finite");
}

PriceState PriceState::from_prices(std::span<const double> prices) {
  if (prices.empty()) throw InputError("PriceState: empty window");
  std::vector<double> logs;
  logs.reserve(prices.size());
  for (double p : prices) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw InputError("PriceState: prices must be positive and finite");
    }
    logs.push_back(std::log(p));
  }
  return PriceState(std::move(logs));
}

PriceState PriceState::from_log_prices(std::vector<double> log_prices) {
  if (log_prices.empty()) throw InputError("PriceState: empty window");
  for (double v : log_prices) {
    if (!std::isfinite(v)) throw InputError("PriceState: log-prices must be finite");
  }
  return PriceState(std::move(log_prices));
}

PriceState PriceState::constant(int n, double price) {
  if (n < 1) throw ParameterError("PriceState: window length must be positive");
  const std::vector<double> prices(static_cast<std::size_t>(n), price);
  return from_prices(prices);
}

std::vector<double> PriceState::prices() const {
  std::vector<double> out(log_prices_.size());
  std::transform(log_prices_.begin(), log_prices_.end(), out.begin(),
                 [](double v) { return std::exp(v); });
  return out;
}

void PriceState::push(double log_price) {
  std::shift_left(log_prices_.begin(), log_prices_.end(), 1);
  log_prices_.back() = log_price;
}

ShockSpec ShockSpec::from_simple_return(double p_star, double jump) {
  if (!(jump > -1.0)) throw ParameterError("ShockSpec: simple-return jump must exceed -1");
  ShockSpec s{p_star, std::log1p(jump)};
  s.validate();
  return s;
}

void ShockSpec::validate() const {
  if (!(p_star > 0.0) || !std::isfinite(p_star)) {
    throw ParameterError("ShockSpec: p_star must be positive and finite");
  }
  if (!std::isfinite(r0)) throw ParameterError("ShockSpec: r0 must be finite");
}

std::vector<double> Trajectory::prices() const {
  std::vector<double> out(log_prices.size());
  std::transform(log_prices.begin(), log_prices.end(), out.begin(),
                 [](double v) { return std::exp(v); });
  return out;
}

double moving_average(std::span<const double> window, int length) {
  if (length < 1 || static_cast<std::size_t>(length) > window.size()) {
    throw ParameterError("moving_average: length out of range");
  }
  double sum = 0.0;
  for (double p : window.last(static_cast<std::size_t>(length))) sum += p;
  return sum / length;
}

double log_ratio_x(const PriceState& state, int m, int n) {
  if (m < 1 || n <= m || static_cast<std::size_t>(n) != state.size()) {
    throw ParameterError("log_ratio_x: need 1 <= m < n == window length");
  }
  return log_ratio_from_logs(state.log_prices(), m);
}

double next_return(const PriceState& state, const ModelParams& params) {
  params.validate();
  return params.a1 * ed1(log_ratio_x(state, params.m, params.n), params.w);
}

PriceState step(const PriceState& state, const ModelParams& params) {
  PriceState next = state;
  next.push(state.last_log_price() + next_return(state, params));
  return next;
}

PriceState initial_state(const ModelParams& params, const ShockSpec& shock) {
  params.validate();
  shock.validate();
  std::vector<double> logs(static_cast<std::size_t>(params.n), std::log(shock.p_star));
  logs.back() += shock.r0;
  return PriceState::from_log_prices(std::move(logs));
}

Trajectory simulate(const ModelParams& params, const ShockSpec& shock, int horizon,
                    const SimulationOptions& options) {
  if (horizon < 1) throw ParameterError("simulate: horizon must be >= 1");
  Trajectory traj{params, shock, {}, std::nullopt};
  PriceState state = initial_state(params, shock);
  const double log_star = std::log(shock.p_star);
  const double a1 = params.a1;
  const double w = params.w;

  traj.log_prices.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.log_prices.push_back(state.last_log_price());
  for (int t = 1; t <= horizon; ++t) {
    const double x = log_ratio_from_logs(state.log_prices(), params.m);
    const double next = state.last_log_price() + a1 * ed1(x, w);
    state.push(next);
    traj.log_prices.push_back(next);
    if (!std::isfinite(next) || std::fabs(next - log_star) > options.divergence_log_bound) {
      traj.divergence_step = t;
      break;
    }
  }
  return traj;
}

std::vector<double> returns(std::span<const double> log_prices) {
  if (log_prices.size() < 2) throw InputError("returns: need at least two prices");
  std::vector<double> out(log_prices.size() - 1);
  for (std::size_t i = 1; i < log_prices.size(); ++i) out[i - 1] = log_prices[i] - log_prices[i - 1];
  return out;
}

std::vector<double> returns(const Trajectory& trajectory) { return returns(trajectory.log_prices); }

}  // namespace chaosmarket
