#include "chaosmarket/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chaosmarket/error.hpp"

namespace chaosmarket {

namespace {

struct Moments {
  double mean = 0.0;
  double m2 = 0.0;
  double m4 = 0.0;
};

Moments central_moments(std::span<const double> x) {
  Moments m;
  for (double v : x) m.mean += v;
  m.mean /= static_cast<double>(x.size());
  for (double v : x) {
    const double d = (v - m.mean) * (v - m.mean);
    m.m2 += d;
    m.m4 += d * d;
  }
  m.m2 /= static_cast<double>(x.size());
  m.m4 /= static_cast<double>(x.size());
  return m;
}

}  // namespace

std::vector<std::pair<double, double>> phase_portrait(std::span<const double> returns,
                                                      std::size_t burn_in) {
  if (returns.size() < burn_in + 2) throw ParameterError("phase_portrait: need two returns after burn-in");
  std::vector<std::pair<double, double>> out;
  out.reserve(returns.size() - burn_in - 1);
  for (std::size_t t = burn_in + 1; t < returns.size(); ++t) out.emplace_back(returns[t - 1], returns[t]);
  return out;
}

Histogram return_histogram(std::span<const double> returns, int bin_count) {
  if (bin_count < 10) throw ParameterError("return_histogram: need at least 10 bins");
  if (returns.size() < 1000) throw ParameterError("return_histogram: need at least 1000 samples");

  Histogram h;
  const auto mom = central_moments(returns);
  h.sample_mean = mom.mean;
  h.sample_variance = mom.m2;
  const auto [lo_it, hi_it] = std::minmax_element(returns.begin(), returns.end());
  double lo = *lo_it;
  double hi = *hi_it;
  h.degenerate = !(hi > lo) || !(mom.m2 > 0.0);
  if (h.degenerate) {
    lo -= 0.5;
    hi += 0.5;
  }

  const auto bins = static_cast<std::size_t>(bin_count);
  const double width = (hi - lo) / bin_count;
  h.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.bin_edges[i] = lo + width * static_cast<double>(i);
  h.bin_edges.back() = hi;

  std::vector<std::size_t> counts(bins, 0);
  for (double r : returns) {
    auto idx = static_cast<std::size_t>((r - lo) / width);
    counts[std::min(idx, bins - 1)]++;
  }
  const double total = static_cast<double>(returns.size());
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) h.densities[i] = static_cast<double>(counts[i]) / (total * h.width(i));

  if (!h.degenerate) {
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * h.sample_variance);
    h.matched_gaussian.resize(bins);
    for (std::size_t i = 0; i < bins; ++i) {
      const double c = h.centre(i);
      h.matched_gaussian[i] = norm * std::exp(-c * c / (2.0 * h.sample_variance));
    }
  }
  return h;
}

std::vector<double> log_densities(std::span<const double> densities) {
  std::vector<double> out(densities.size());
  std::transform(densities.begin(), densities.end(), out.begin(), [](double d) {
    return d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity();
  });
  return out;
}

double excess_kurtosis(std::span<const double> returns) {
  if (returns.size() < 1000) throw ParameterError("excess_kurtosis: need at least 1000 samples");
  const auto m = central_moments(returns);
  if (!(m.m2 > 0.0)) throw NumericError("excess_kurtosis: degenerate variance");
  return m.m4 / (m.m2 * m.m2) - 3.0;
}

double tail_mass_ratio(std::span<const double> returns, double k_sigma) {
  if (returns.empty()) throw ParameterError("tail_mass_ratio: empty sample");
  if (!(k_sigma > 0.0)) throw ParameterError("tail_mass_ratio: k_sigma must be positive");
  const auto m = central_moments(returns);
  if (!(m.m2 > 0.0)) throw NumericError("tail_mass_ratio: degenerate variance");
  const double cut = k_sigma * std::sqrt(m.m2);
  const auto beyond = std::count_if(returns.begin(), returns.end(),
                                    [&](double r) { return std::fabs(r - m.mean) > cut; });
  const double empirical = static_cast<double>(beyond) / static_cast<double>(returns.size());
  return empirical / std::erfc(k_sigma / std::numbers::sqrt2);
}

}  // namespace chaosmarket
