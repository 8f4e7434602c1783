#pragma once

#include <span>
#include <utility>
#include <vector>

namespace chaosmarket {

/// (r_{t-1}, r_t) pairs after dropping the first `burn_in` returns.
std::vector<std::pair<double, double>> phase_portrait(std::span<const double> returns,
                                                      std::size_t burn_in = 0);

struct Histogram {
  std::vector<double> bin_edges;  // bin_count + 1, ascending
  std::vector<double> densities;  // integrates to 1
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  /// Zero-mean Gaussian with sample_variance at the bin centres; empty when
  /// the sample is degenerate.
  std::vector<double> matched_gaussian;
  bool degenerate = false;

  std::size_t bin_count() const { return densities.size(); }
  double centre(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
  double width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }
};

/// Equal-width histogram over [min, max]; needs >= 1000 samples and >= 10 bins.
Histogram return_histogram(std::span<const double> returns, int bin_count);

/// ln(density), -inf for empty bins.
std::vector<double> log_densities(std::span<const double> densities);

/// Fourth standardised moment minus 3 (population moments).
double excess_kurtosis(std::span<const double> returns);

/// Fraction of samples beyond k standard deviations from the mean, divided
/// by the same fraction for a Gaussian.
double tail_mass_ratio(std::span<const double> returns, double k_sigma);

}  // namespace chaosmarket
