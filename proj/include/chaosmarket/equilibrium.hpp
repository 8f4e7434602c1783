#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "chaosmarket/price_engine.hpp"

namespace chaosmarket {

/// Jacobian of the state map at a constant window, plus its spectrum.
struct Linearization {
  Eigen::MatrixXd jacobian;
  std::vector<std::complex<double>> eigenvalues;
  double max_modulus = 0.0;
};

/// True iff one step moves no price coordinate by more than tol.
bool is_equilibrium(const PriceState& state, const ModelParams& params, double tol);

/// Last component of the state map in price coordinates: y_n * exp(a1 ed1(x)).
double bottom_component(std::span<const double> prices, const ModelParams& params);

/**
 * Central-difference Jacobian of the full state map at (p*, ..., p*).
 *
 * h is rounded to the nearest power of two so that y +- h is exact; the
 * shift rows then come out as exact 0/1 entries.
 */
Linearization jacobian_fd(const ModelParams& params, double p_star, double h);

/// Eigen-decomposition of an arbitrary square matrix.
Linearization linearize(Eigen::MatrixXd jacobian);

/**
 * Bottom row of the Jacobian at equilibrium by the chain rule:
 * df/dy_i = [i == n] + a1 (0.1/w) ([i > n-m]/m - 1/n).  p* cancels.
 */
Eigen::VectorXd chain_rule_bottom_row(const ModelParams& params);

/// Companion matrix with shift rows and the chain-rule bottom row.
Eigen::MatrixXd analytic_jacobian(const ModelParams& params);

/// df/dy_n with an extra p* factor; kept to compare against the finite difference.
double scaled_bottom_right(const ModelParams& params, double p_star);

/**
 * Eigenvalues of a companion matrix with the given bottom row once the root
 * at 1 is divided out of its characteristic polynomial.  Constant states form
 * a line of equilibria, so rows summing to 1 always carry that root; removing
 * it keeps a repeated unit root from amplifying finite-difference noise.
 */
std::vector<std::complex<double>> transverse_eigenvalues(const Eigen::VectorXd& bottom_row);

struct InstabilityCertificate {
  ModelParams params;
  double p_star = 0.0;
  /// max(1, transverse_max_modulus): the structural unit root is always present.
  double max_modulus = 0.0;
  double transverse_max_modulus = 0.0;
  bool unstable = false;
};

/// Eigenvalue moduli within this distance of 1 count as on the unit circle.
inline constexpr double kUnitCircleTolerance = 1e-8;

/// Linearized-stability verdict from the finite-difference Jacobian.
InstabilityCertificate instability_certificate(const ModelParams& params, double p_star);

enum class LinearModelBehavior { convergent, divergent, oscillatory };

/// Path of ln p_{t+1} = ln p_t + a (ln p_t - ln p_{t-1}).
struct LinearModelPath {
  double a = 0.0;
  ShockSpec shock;
  std::vector<double> log_prices;  // p_0 ... p_T
  LinearModelBehavior behavior = LinearModelBehavior::convergent;
};

LinearModelPath linear_model_simulate(double a, double p_star, double r0, int horizon);

/// p* exp(r0 / (1 - a)); DomainError unless |a| < 1.
double linear_model_limit(double a, double p_star, double r0);

struct SetStabilityOptions {
  int horizon = 10000;
  int trailing = 100;
  double tol = 1e-10;
};

std::vector<double> default_probe_shocks();

/// True iff every shocked trajectory settles to a finite positive price.
bool set_stability_probe(const ModelParams& params, double p_star, const std::vector<double>& shocks,
                         const SetStabilityOptions& options = {});

}  // namespace chaosmarket
