#include "chaosmarket/fuzzy_demand.hpp"

#include <cmath>
#include <string>

#include "chaosmarket/error.hpp"

namespace chaosmarket {

namespace {

void check_inputs(double x, double w) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw ParameterError("ed1: w must be positive and finite, got " + std::to_string(w));
  }
  if (!std::isfinite(x)) {
    throw InputError("ed1: x must be finite");
  }
}

// ed1 on the nonnegative half-axis, u = |x| / w.  Each segment is written
// relative to its left breakpoint so the breakpoint values are exact.
double half_axis(double u) {
  if (u < 1.0) return kOriginSlope * u;
  if (u < 2.0) return 0.1 + 0.3 * (u - 1.0);
  if (u < 3.0) return kPeakDemand - 0.6 * (u - 2.0);
  return -kSaturatedDemand;
}

}  // namespace

double ed1(double x, double w) {
  check_inputs(x, w);
  const double u = x / w;
  const double value = half_axis(std::fabs(u));
  return std::signbit(u) ? -value : value;
}

std::string_view to_string(DemandZone zone) {
  switch (zone) {
    case DemandZone::trend_following: return "trend_following";
    case DemandZone::contrarian: return "contrarian";
    case DemandZone::saturated: return "saturated";
  }
  return "unknown";
}

DemandShape::DemandShape(double w, double a1) : w_(w), a1_(a1) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw ParameterError("DemandShape: w must be positive and finite");
  }
  if (!std::isfinite(a1)) {
    throw ParameterError("DemandShape: a1 must be finite");
  }
}

double DemandShape::operator()(double x) const { return a1_ * ed1(x, w_); }

std::array<double, 6> DemandShape::breakpoints() const {
  return {-3.0 * w_, -2.0 * w_, -w_, w_, 2.0 * w_, 3.0 * w_};
}

double excess_demand(double x, const DemandShape& shape) { return shape(x); }

DemandZone zone_of(double x, double w) {
  check_inputs(x, w);
  const double u = std::fabs(x / w);
  if (u < kZeroCrossing) return DemandZone::trend_following;
  if (u < 3.0) return DemandZone::contrarian;
  return DemandZone::saturated;
}

}  // namespace chaosmarket
