#include "aot/entropic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "aot/errors.hpp"

namespace aot {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// max(a) + log(sum exp(a - max)) over finite entries; -inf when all are -inf.
double logsumexp(const std::vector<double>& a) {
  double hi = kNegInf;
  for (double x : a) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : a) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

double sup_change(const std::vector<double>& before, const std::vector<double>& after) {
  double delta = 0.0;
  for (std::size_t k = 0; k < before.size(); ++k) {
    if (std::isinf(before[k]) && std::isinf(after[k])) continue;
    delta = std::max(delta, std::abs(after[k] - before[k]));
  }
  return delta;
}

}  // namespace

SolveReport solve_aot_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const CostMatrix& C, const SinkhornConfig& config) {
  if (mu.size() != C.rows() || nu.size() != C.cols())
    throw ShapeError("cost is " + std::to_string(C.rows()) + "x" +
                     std::to_string(C.cols()) + " but measures have " +
                     std::to_string(mu.size()) + " and " + std::to_string(nu.size()) +
                     " atoms");
  if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon))
    throw ValidationError("epsilon must be positive and finite");
  if (!(config.tol > 0.0)) throw ValidationError("tol must be positive");
  if (config.max_iter < 1) throw ValidationError("max_iter must be at least 1");
  if (!(mu.total() > 0.0) || !(nu.total() > 0.0))
    throw ValidationError("both measures must carry positive total mass");

  const std::size_t n = mu.size(), m = nu.size();
  const double eps = config.epsilon;

  std::vector<double> phi(n), psi(m);
  for (std::size_t i = 0; i < n; ++i) phi[i] = mu[i] > 0.0 ? 0.0 : kNegInf;
  for (std::size_t j = 0; j < m; ++j) psi[j] = nu[j] > 0.0 ? 0.0 : kNegInf;

  std::vector<double> phi_prev(n), psi_prev(m), terms(std::max(n, m));
  std::vector<double> residual_history;
  residual_history.reserve(64);

  long sweeps = 0;
  bool converged = false;
  double residual = std::numeric_limits<double>::infinity();
  while (sweeps < config.max_iter) {
    ++sweeps;
    phi_prev = phi;
    psi_prev = psi;

    for (std::size_t i = 0; i < n; ++i) {
      if (!(mu[i] > 0.0)) continue;
      terms.resize(m);
      for (std::size_t j = 0; j < m; ++j) terms[j] = (psi[j] - C(i, j)) / eps;
      phi[i] = std::min(0.0, eps * std::log(mu[i]) - eps * logsumexp(terms));
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (!(nu[j] > 0.0)) continue;
      terms.resize(n);
      for (std::size_t i = 0; i < n; ++i) terms[i] = (phi[i] - C(i, j)) / eps;
      psi[j] = std::min(0.0, eps * std::log(nu[j]) - eps * logsumexp(terms));
    }

    double overflow = 0.0;
    {
      std::vector<double> col_sums(m, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          const double g = std::exp((phi[i] + psi[j] - C(i, j)) / eps);
          row_sum += g;
          col_sums[j] += g;
        }
        overflow = std::max(overflow, row_sum - mu[i]);
      }
      for (std::size_t j = 0; j < m; ++j)
        overflow = std::max(overflow, col_sums[j] - nu[j]);
      overflow = std::max(overflow, 0.0);
    }
    const double change = std::max(sup_change(phi_prev, phi), sup_change(psi_prev, psi));
    residual = std::max(overflow, change);
    residual_history.push_back(residual);
    if (residual <= config.tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("no convergence after " + std::to_string(sweeps) +
                           " sweeps; last residual " + std::to_string(residual));

  DenseMatrix gamma(n, m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      gamma(i, j) = std::exp((phi[i] + psi[j] - C(i, j)) / eps);

  SolveReport report;
  report.method = "aot-sinkhorn";
  report.plan = TransportPlan::from_matrix(std::move(gamma));
  report.marginals = summarize_plan(report.plan, C, mu, nu);
  report.duals.phi = std::move(phi);
  report.duals.psi = std::move(psi);
  report.iterations = sweeps;
  report.epsilon = eps;
  report.residual_history = std::move(residual_history);

  for (std::size_t i = 0; i < n; ++i)
    if (mu[i] > 0.0) report.dual_value += report.duals.phi[i] * mu[i];
  for (std::size_t j = 0; j < m; ++j)
    if (nu[j] > 0.0) report.dual_value += report.duals.psi[j] * nu[j];
  report.duality_gap = std::abs(report.marginals.objective - report.dual_value);

  double entropy_term = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double g = report.plan(i, j);
      if (g > 0.0) entropy_term += g * (std::log(g) - 1.0);
    }
  report.entropic_value = report.marginals.objective + eps * entropy_term;
  return report;
}

}  // namespace aot
