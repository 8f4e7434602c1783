#include "chaosmarket/chaos_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chaosmarket/error.hpp"
#include "chaosmarket/parallel.hpp"

namespace chaosmarket {

namespace {

void require_unit_short_window(const ModelParams& params, const char* who) {
  params.validate();
  if (params.m != 1) {
    throw ParameterError(std::string(who) + ": only m = 1 is supported");
  }
}

double checked_log(double arg, const char* who) {
  if (!(arg > 0.0)) throw DomainError(std::string(who) + ": logarithm argument must be positive");
  return std::log(arg);
}

bool slowly_settling(std::span<const double> tail, const RegimeCriteria& c) {
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (std::fabs(tail[i]) >= c.slow_decay_ceiling) return false;
    if (i > 0) {
      if (std::signbit(tail[i]) != std::signbit(tail[i - 1])) return false;
      if (std::fabs(tail[i]) > std::fabs(tail[i - 1])) return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::convergent: return "convergent";
    case Regime::divergent: return "divergent";
    case Regime::chaotic: return "chaotic";
    case Regime::oscillating: return "oscillating";
    case Regime::undetermined: return "undetermined";
  }
  return "undetermined";
}

Regime classify_regime(const Trajectory& trajectory, const RegimeCriteria& criteria) {
  if (trajectory.diverged()) return Regime::divergent;
  const int steps = static_cast<int>(trajectory.log_prices.size()) - 1;
  if (steps < criteria.horizon || steps < criteria.trailing + 1) return Regime::undetermined;

  const auto r = returns(trajectory);
  const auto tail = std::span<const double>(r).last(static_cast<std::size_t>(criteria.trailing));

  const bool settled = std::all_of(tail.begin(), tail.end(),
                                   [&](double v) { return std::fabs(v) < criteria.conv_tol; });
  if (settled) return Regime::convergent;

  bool alternating = true;
  for (std::size_t i = 0; i < tail.size() && alternating; ++i) {
    if (!(std::fabs(tail[i]) > criteria.conv_tol)) alternating = false;
    if (i > 0 && !(std::fabs(tail[i] + tail[i - 1]) < criteria.osc_tol)) alternating = false;
  }
  if (alternating) {
    // a period-2 swing whose amplitude still shrinks is a slow convergence
    const double first = std::fabs(tail.front());
    const double last = std::fabs(tail.back());
    return std::fabs(last - first) <= 1e-6 * first ? Regime::oscillating : Regime::undetermined;
  }

  if (slowly_settling(tail, criteria)) return Regime::undetermined;
  return Regime::chaotic;
}

Classification classify_params(const ModelParams& params, const ShockSpec& shock,
                               const RegimeCriteria& criteria, const SimulationOptions& options) {
  if (criteria.horizon < 1 || criteria.max_extension < 1) {
    throw ParameterError("classify_params: horizon and max_extension must be positive");
  }
  Classification out;
  for (int factor = 1; factor <= criteria.max_extension; factor *= 2) {
    RegimeCriteria local = criteria;
    local.horizon = criteria.horizon * factor;
    const auto traj = simulate(params, shock, local.horizon, options);
    out.regime = classify_regime(traj, local);
    out.steps = static_cast<int>(traj.log_prices.size()) - 1;
    if (out.regime != Regime::undetermined) break;
  }
  return out;
}

ZoneMap sweep_regimes(std::span<const double> a1_grid, const ModelParams& base, const ShockSpec& shock,
                      const RegimeCriteria& criteria, int threads) {
  if (!std::is_sorted(a1_grid.begin(), a1_grid.end())) {
    throw ParameterError("sweep_regimes: grid must be sorted ascending");
  }
  ZoneMap map;
  map.points.resize(a1_grid.size());
  parallel_for(a1_grid.size(), threads, [&](std::size_t i) {
    ModelParams p = base;
    p.a1 = a1_grid[i];
    const auto c = classify_params(p, shock, criteria);
    map.points[i] = ZonePoint{p.a1, c.regime, c.steps};
  });
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    const auto& pt = map.points[i];
    if (map.zones.empty() || map.zones.back().regime != pt.regime) {
      map.zones.push_back(Zone{pt.regime, pt.a1, pt.a1, i, i});
    } else {
      map.zones.back().a1_last = pt.a1;
      map.zones.back().last_index = i;
    }
  }
  return map;
}

LyapunovCandidates lyapunov_candidates(const ModelParams& params) {
  require_unit_short_window(params, "lyapunov_candidates");
  const double n = params.n;
  const double k = kOriginSlope * params.a1 / params.w;
  const double grow1 = k * (1.0 - 1.0 / n);
  const double grow2 = (n - 2.0) / (n - 1.0) + grow1;
  const double grow3 = ((n - 3.0) / (n - 1.0) + k * (1.0 - 2.0 / n)) / grow2 + grow1;
  return {checked_log(grow1, "lyapunov_candidates L1"), checked_log(grow2, "lyapunov_candidates L2"),
          checked_log(grow3, "lyapunov_candidates L3")};
}

double lyapunov_gap(const ModelParams& params) {
  require_unit_short_window(params, "lyapunov_gap");
  const double n = params.n;
  const double k = kOriginSlope * params.a1 / params.w;
  return -n / (n * (n - 1.0) * (n - 2.0) + k * (n - 1.0) * (n - 1.0) * (n - 1.0));
}

double analytic_lyapunov(const ModelParams& params) {
  require_unit_short_window(params, "analytic_lyapunov");
  const double n = params.n;
  const double k = kOriginSlope * params.a1 / params.w;
  return checked_log((n - 2.0) / (n - 1.0) + k * (1.0 - 1.0 / n), "analytic_lyapunov");
}

LyapunovFit empirical_lyapunov(const VolatilityCurve& curve, double v_inf) {
  if (!(v_inf > 0.0)) throw NumericError("empirical_lyapunov: v_inf must be positive (no growth)");
  if (curve.size() < 4) throw NumericError("empirical_lyapunov: curve too short");
  if (!(curve.at(1) < v_inf / 10.0)) {
    throw NumericError("empirical_lyapunov: insufficient growth, v(1) is not below v_inf / 10");
  }
  const double ceiling = v_inf / 3.0;
  int t_end = 1;
  while (t_end + 1 <= static_cast<int>(curve.size()) && curve.at(t_end + 1) < ceiling &&
         curve.at(t_end + 1) > 0.0) {
    ++t_end;
  }
  const int t_start = 2;
  const int count = t_end - t_start + 1;
  if (count < 3) throw NumericError("empirical_lyapunov: insufficient growth window");

  double mt = 0.0, my = 0.0;
  for (int t = t_start; t <= t_end; ++t) {
    mt += t;
    my += std::log(curve.at(t));
  }
  mt /= count;
  my /= count;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (int t = t_start; t <= t_end; ++t) {
    const double dt = t - mt;
    const double dy = std::log(curve.at(t)) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  LyapunovFit fit;
  fit.exponent = sty / stt;
  fit.intercept = my - fit.exponent * mt;
  fit.t_start = t_start;
  fit.t_end = t_end;
  fit.fit_quality = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  return fit;
}

double v_infinity_formula(double a1, double w) {
  if (a1 == 0.0) return 0.0;
  return 0.19 * a1 + 0.03 * a1 * std::sin(std::numbers::pi / (0.1 * a1) * (w + 0.06 * a1));
}

OscillationVolatility oscillation_volatility(const ModelParams& params) {
  require_unit_short_window(params, "oscillation_volatility");
  const double half = static_cast<double>(params.n / 2);
  return {0.2 * params.a1, half / params.n * params.a1 >= 15.0 * params.w};
}

double distance_to_independence(std::span<const double> d_curve, double v_inf, int n1, int n2) {
  if (n1 < 1 || n2 <= n1 || static_cast<std::size_t>(n2) > d_curve.size()) {
    throw ParameterError("distance_to_independence: need 1 <= N1 < N2 <= curve length");
  }
  double sum = 0.0;
  for (int t = n1; t <= n2; ++t) {
    sum += d_curve[static_cast<std::size_t>(t - 1)] - v_inf * std::sqrt(static_cast<double>(t));
  }
  return sum / (n2 - n1 + 1);
}

IndependenceReport independence_report(const DriftCurve& drift, double v_inf, int n1, int n2) {
  return {distance_to_independence(drift.values, v_inf, n1, n2), v_inf, n1, n2, drift.values};
}

double independence_locus(double w) {
  if (!(w >= 0.0)) throw ParameterError("independence_locus: w must be >= 0");
  return 14.28 * w;
}

std::vector<double> zero_crossings(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ParameterError("zero_crossings: xs and ys differ in length");
  std::vector<double> out;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ys[i] == 0.0) {
      out.push_back(xs[i]);
      continue;
    }
    if (i + 1 < ys.size() && ys[i + 1] != 0.0 && std::signbit(ys[i]) != std::signbit(ys[i + 1])) {
      const double frac = ys[i] / (ys[i] - ys[i + 1]);
      out.push_back(xs[i] + frac * (xs[i + 1] - xs[i]));
    }
  }
  return out;
}

std::vector<double> autocorrelation(std::span<const double> returns, int max_lag) {
  if (max_lag < 1) throw ParameterError("autocorrelation: max_lag must be >= 1");
  if (returns.size() <= static_cast<std::size_t>(10 * max_lag)) {
    throw ParameterError("autocorrelation: sequence must be longer than 10 * max_lag");
  }
  const double n = static_cast<double>(returns.size());
  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= n;
  double c0 = 0.0;
  for (double r : returns) c0 += (r - mean) * (r - mean);
  if (!(c0 > 0.0)) throw NumericError("autocorrelation: sequence has zero variance");

  std::vector<double> out(static_cast<std::size_t>(max_lag));
  for (int k = 1; k <= max_lag; ++k) {
    double ck = 0.0;
    for (std::size_t t = 0; t + static_cast<std::size_t>(k) < returns.size(); ++t) {
      ck += (returns[t] - mean) * (returns[t + static_cast<std::size_t>(k)] - mean);
    }
    out[static_cast<std::size_t>(k - 1)] = ck / c0;
  }
  return out;
}

}  // namespace chaosmarket
