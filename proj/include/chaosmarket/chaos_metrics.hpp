#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "chaosmarket/monte_carlo.hpp"
#include "chaosmarket/price_engine.hpp"

namespace chaosmarket {

enum class Regime { convergent, divergent, chaotic, oscillating, undetermined };

std::string_view to_string(Regime regime);

struct RegimeCriteria {
  int trailing = 100;
  double conv_tol = 1e-10;
  double osc_tol = 1e-8;
  int horizon = 5000;
  /// classify_params re-runs undetermined slow convergence up to
  /// horizon * max_extension steps.
  int max_extension = 20;
  /// Trailing returns below this, monotonically shrinking and of one sign,
  /// are read as a convergence that has not reached conv_tol yet.
  double slow_decay_ceiling = 1e-4;
};

/**
 * Label a trajectory from its trailing returns.
 *
 *  - divergent:    the divergence guard fired
 *  - convergent:   all trailing |r| < conv_tol
 *  - oscillating:  |r_t + r_{t-1}| < osc_tol and |r_t| > conv_tol throughout,
 *                  with a steady amplitude
 *  - undetermined: fewer than `horizon` steps, or a monotone or alternating
 *                  decay that has not reached conv_tol
 *  - chaotic:      anything else (bounded, not settling, not period 2)
 */
Regime classify_regime(const Trajectory& trajectory, const RegimeCriteria& criteria = {});

struct Classification {
  Regime regime = Regime::undetermined;
  int steps = 0;
};

/// Simulate and classify, lengthening the run while the label is undetermined.
Classification classify_params(const ModelParams& params, const ShockSpec& shock,
                               const RegimeCriteria& criteria = {},
                               const SimulationOptions& options = {});

struct ZonePoint {
  double a1 = 0.0;
  Regime regime = Regime::undetermined;
  int steps = 0;
};

/// Maximal run of grid points sharing a label.
struct Zone {
  Regime regime = Regime::undetermined;
  double a1_first = 0.0;
  double a1_last = 0.0;
  std::size_t first_index = 0;
  std::size_t last_index = 0;
};

struct ZoneMap {
  std::vector<ZonePoint> points;
  std::vector<Zone> zones;
};

/// Label every a1 of an ascending grid (base params otherwise fixed).
ZoneMap sweep_regimes(std::span<const double> a1_grid, const ModelParams& base, const ShockSpec& shock,
                      const RegimeCriteria& criteria = {}, int threads = 1);

/// Growth-rate candidates ln(r1/r0), ln(r2/r1), ln(r3/r2) for m = 1.
struct LyapunovCandidates {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
};

LyapunovCandidates lyapunov_candidates(const ModelParams& params);

/// Closed form of exp(L3) - exp(L2): -n / (n(n-1)(n-2) + k (n-1)^3), k = 0.1 a1 / w.
double lyapunov_gap(const ModelParams& params);

/// L2 = ln((n-2)/(n-1) + (0.1 a1 / w)(1 - 1/n)); requires m = 1.
double analytic_lyapunov(const ModelParams& params);

struct LyapunovFit {
  double exponent = 0.0;
  double intercept = 0.0;
  int t_start = 0;
  int t_end = 0;
  /// r^2 of the fit of ln v(t) on t.
  double fit_quality = 0.0;
};

/**
 * Slope of ln v(t) against t over the growth window: t = 2 up to the last
 * t with v(s) < v_inf / 3 for all s <= t.  NumericError when the window
 * has fewer than three points or v(1) is not below v_inf / 10.
 */
LyapunovFit empirical_lyapunov(const VolatilityCurve& curve, double v_inf);

/// 0.19 a1 + 0.03 a1 sin(pi (w + 0.06 a1) / (0.1 a1)); chaos zone of (1, 5) only.
double v_infinity_formula(double a1, double w);

struct OscillationVolatility {
  double v_inf = 0.0;
  bool constraint_holds = false;
};

/// Two-value oscillation: v_inf = 0.2 a1, needing int(n/2) a1 / n >= 15 w.
OscillationVolatility oscillation_volatility(const ModelParams& params);

struct IndependenceReport {
  double distance = 0.0;  // I
  double v_inf = 0.0;
  int n1 = 0;
  int n2 = 0;
  std::vector<double> d_curve;
};

/// I = sum_{t=N1}^{N2} (d(t) - v_inf sqrt(t)) / (N2 - N1 + 1), d(t) = d_curve[t - 1].
double distance_to_independence(std::span<const double> d_curve, double v_inf, int n1, int n2);

IndependenceReport independence_report(const DriftCurve& drift, double v_inf, int n1, int n2);

/// a1 ~ 14.28 w, where returns behave as independent.
double independence_locus(double w);

/// Linearly interpolated abscissae where ys changes sign (exact zeros included once).
std::vector<double> zero_crossings(std::span<const double> xs, std::span<const double> ys);

/// Sample autocorrelation (mean removed, normalised by lag 0) for lags 1 ... max_lag.
std::vector<double> autocorrelation(std::span<const double> returns, int max_lag);

}  // namespace chaosmarket
