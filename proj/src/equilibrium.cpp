#include "chaosmarket/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "chaosmarket/error.hpp"

namespace chaosmarket {

bool is_equilibrium(const PriceState& state, const ModelParams& params, double tol) {
  const auto before = state.prices();
  const auto after = step(state, params).prices();
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (!(std::fabs(after[i] - before[i]) <= tol)) return false;
  }
  return true;
}

double bottom_component(std::span<const double> prices, const ModelParams& params) {
  const int n = params.n;
  const double short_avg = moving_average(prices, params.m);
  const double long_avg = moving_average(prices, n);
  const double x = std::log(short_avg) - std::log(long_avg);
  return prices.back() * std::exp(params.a1 * ed1(x, params.w));
}

Linearization jacobian_fd(const ModelParams& params, double p_star, double h) {
  params.validate();
  if (!(p_star > 0.0)) throw ParameterError("jacobian_fd: p_star must be positive");
  if (!(h > 0.0) || !std::isfinite(h) || h >= p_star) {
    throw ParameterError("jacobian_fd: step h must be in (0, p_star)");
  }
  const double step_size = std::exp2(std::round(std::log2(h)));
  const auto n = static_cast<Eigen::Index>(params.n);
  const std::vector<double> base(static_cast<std::size_t>(n), p_star);

  auto map = [&](const std::vector<double>& y) {
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) out(i) = y[static_cast<std::size_t>(i + 1)];
    out(n - 1) = bottom_component(y, params);
    return out;
  };

  Eigen::MatrixXd jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    auto plus = base;
    auto minus = base;
    plus[static_cast<std::size_t>(j)] += step_size;
    minus[static_cast<std::size_t>(j)] -= step_size;
    jac.col(j) = (map(plus) - map(minus)) / (2.0 * step_size);
  }
  return linearize(std::move(jac));
}

Linearization linearize(Eigen::MatrixXd jacobian) {
  if (jacobian.rows() != jacobian.cols() || jacobian.rows() == 0) {
    throw ParameterError("linearize: matrix must be square and non-empty");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(jacobian, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericError("linearize: eigensolver did not converge");

  Linearization out;
  out.jacobian = std::move(jacobian);
  const auto& values = solver.eigenvalues();
  out.eigenvalues.assign(values.begin(), values.end());
  for (const auto& v : out.eigenvalues) out.max_modulus = std::max(out.max_modulus, std::abs(v));
  return out;
}

Eigen::VectorXd chain_rule_bottom_row(const ModelParams& params) {
  params.validate();
  const double gain = params.a1 * kOriginSlope / params.w;
  Eigen::VectorXd row(params.n);
  for (int i = 0; i < params.n; ++i) {
    const double in_short = (i >= params.n - params.m) ? 1.0 / params.m : 0.0;
    row(i) = gain * (in_short - 1.0 / params.n);
  }
  row(params.n - 1) += 1.0;
  return row;
}

Eigen::MatrixXd analytic_jacobian(const ModelParams& params) {
  const Eigen::Index n = params.n;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) jac(i, i + 1) = 1.0;
  jac.row(n - 1) = chain_rule_bottom_row(params).transpose();
  return jac;
}

double scaled_bottom_right(const ModelParams& params, double p_star) {
  params.validate();
  return 1.0 + params.a1 * p_star * (kOriginSlope / params.w) *
                   (1.0 / params.m - 1.0 / params.n);
}

std::vector<std::complex<double>> transverse_eigenvalues(const Eigen::VectorXd& bottom_row) {
  const auto n = bottom_row.size();
  if (n < 2) throw ParameterError("transverse_eigenvalues: need at least two coefficients");
  // lambda^n - sum_i b_i lambda^i, synthetic division by (lambda - 1)
  std::vector<double> q(static_cast<std::size_t>(n));
  q[0] = 1.0;
  for (Eigen::Index k = 1; k < n; ++k) q[static_cast<std::size_t>(k)] = q[static_cast<std::size_t>(k - 1)] - bottom_row(n - k);
  const Eigen::Index d = n - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i + 1 < d; ++i) companion(i, i + 1) = 1.0;
  for (Eigen::Index j = 0; j < d; ++j) companion(d - 1, j) = -q[static_cast<std::size_t>(d - j)];
  return linearize(std::move(companion)).eigenvalues;
}

InstabilityCertificate instability_certificate(const ModelParams& params, double p_star) {
  const auto lin = jacobian_fd(params, p_star, 1e-6 * p_star);
  const Eigen::Index n = lin.jacobian.rows();
  double transverse = 0.0;
  for (const auto& ev : transverse_eigenvalues(lin.jacobian.row(n - 1).transpose())) {
    transverse = std::max(transverse, std::abs(ev));
  }
  const double max_modulus = std::max(1.0, transverse);
  return {params, p_star, max_modulus, transverse, max_modulus > 1.0 + kUnitCircleTolerance};
}

LinearModelPath linear_model_simulate(double a, double p_star, double r0, int horizon) {
  if (horizon < 1) throw ParameterError("linear_model_simulate: horizon must be >= 1");
  if (!std::isfinite(a)) throw ParameterError("linear_model_simulate: a must be finite");
  LinearModelPath path{a, ShockSpec{p_star, r0}, {}, LinearModelBehavior::convergent};
  path.shock.validate();
  if (a >= 1.0) path.behavior = LinearModelBehavior::divergent;
  else if (a <= -1.0) path.behavior = LinearModelBehavior::oscillatory;

  double prev = std::log(p_star);
  double curr = prev + r0;
  path.log_prices.reserve(static_cast<std::size_t>(horizon) + 1);
  path.log_prices.push_back(curr);
  for (int t = 0; t < horizon; ++t) {
    const double next = curr + a * (curr - prev);
    if (!std::isfinite(next)) break;
    prev = curr;
    curr = next;
    path.log_prices.push_back(curr);
  }
  return path;
}

double linear_model_limit(double a, double p_star, double r0) {
  if (!(std::fabs(a) < 1.0)) throw DomainError("linear_model_limit: requires |a| < 1");
  if (!(p_star > 0.0)) throw ParameterError("linear_model_limit: p_star must be positive");
  return p_star * std::exp(r0 / (1.0 - a));
}

std::vector<double> default_probe_shocks() {
  return {-0.01, -0.005, -0.002, -0.001, 0.001, 0.002, 0.005, 0.01};
}

bool set_stability_probe(const ModelParams& params, double p_star, const std::vector<double>& shocks,
                         const SetStabilityOptions& options) {
  if (options.trailing < 1 || options.horizon < options.trailing) {
    throw ParameterError("set_stability_probe: need 1 <= trailing <= horizon");
  }
  for (double r0 : shocks) {
    const auto traj = simulate(params, ShockSpec{p_star, r0}, options.horizon);
    if (traj.diverged()) return false;
    const auto r = returns(traj);
    const auto tail = std::span<const double>(r).last(static_cast<std::size_t>(options.trailing));
    const bool settled = std::all_of(tail.begin(), tail.end(),
                                     [&](double v) { return std::fabs(v) < options.tol; });
    if (!settled) return false;
  }
  return true;
}

}  // namespace chaosmarket
