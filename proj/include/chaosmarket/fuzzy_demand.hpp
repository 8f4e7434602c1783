#pragma once

#include <array>
#include <string_view>

namespace chaosmarket {

/// Slope of ed1 at the origin, in units of 1/w.
inline constexpr double kOriginSlope = 0.1;

/// Largest value of ed1, attained at x = 2w (and its negative at x = -2w).
inline constexpr double kPeakDemand = 0.4;

/// Value of ed1 for |x| >= 3w.
inline constexpr double kSaturatedDemand = 0.2;

/// |x| / w at which ed1 changes sign (trend-following vs contrarian).
inline constexpr double kZeroCrossing = 8.0 / 3.0;

/**
 * Piecewise-linear excess demand of the moving-average rule group.
 *
 * Seven linear segments with breakpoints at +-w, +-2w, +-3w.  Odd in x,
 * continuous, bounded by +-0.4.  Segments are closed on the left, so a
 * breakpoint is evaluated with the formula of the segment to its right
 * (in |x|); the adjacent formulas agree there anyway.
 *
 * Throws ParameterError if w is not a positive finite number and
 * InputError if x is not finite.
 */
double ed1(double x, double w);

enum class DemandZone { trend_following, contrarian, saturated };

std::string_view to_string(DemandZone zone);

/// Frequency parameter w together with the rule-group strength a1.
class DemandShape {
 public:
  DemandShape(double w, double a1);

  double w() const { return w_; }
  double a1() const { return a1_; }

  /// a1 * ed1(x, w)
  double operator()(double x) const;

  /// {-3w, -2w, -w, w, 2w, 3w}
  std::array<double, 6> breakpoints() const;

 private:
  double w_;
  double a1_;
};

double excess_demand(double x, const DemandShape& shape);

/// trend_following for |x| < 8w/3, contrarian up to 3w, saturated beyond.
DemandZone zone_of(double x, double w);

}  // namespace chaosmarket
