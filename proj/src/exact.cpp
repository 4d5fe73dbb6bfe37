#include "aot/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aot/errors.hpp"
#include "aot/transport_simplex.hpp"

namespace aot {

AugmentedProblem augment(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const CostMatrix& C) {
  if (mu.size() != C.rows() || nu.size() != C.cols())
    throw ShapeError("cost is " + std::to_string(C.rows()) + "x" +
                     std::to_string(C.cols()) + " but measures have " +
                     std::to_string(mu.size()) + " and " + std::to_string(nu.size()) +
                     " atoms");
  const std::size_t n = mu.size(), m = nu.size();

  std::vector<double> mu_hat = mu.weights();
  mu_hat.push_back(nu.total());
  std::vector<double> nu_hat = nu.weights();
  nu_hat.push_back(mu.total());

  DenseMatrix c_hat(n + 1, m + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) c_hat(i, j) = C(i, j);

  return {DiscreteMeasure(std::move(mu_hat)), DiscreteMeasure(std::move(nu_hat)),
          CostMatrix(std::move(c_hat))};
}

BalancedSolution solve_balanced(const AugmentedProblem& problem) {
  const double total_mu = problem.mu_hat.total();
  const double total_nu = problem.nu_hat.total();
  if (std::abs(total_mu - total_nu) > 1e-9 * std::max(1.0, total_mu))
    throw BalanceError("augmented marginals total " + std::to_string(total_mu) +
                       " and " + std::to_string(total_nu));

  TableauSolution tableau = solve_transport(problem.mu_hat.weights(),
                                            problem.nu_hat.weights(),
                                            problem.c_hat.entries());
  BalancedSolution out;
  out.plan_hat = TransportPlan::from_matrix(std::move(tableau.flow));
  out.node_potentials_u = std::move(tableau.row_duals);
  out.node_potentials_v = std::move(tableau.col_duals);
  out.pivots = tableau.pivots;
  return out;
}

TransportPlan restrict_plan(const BalancedSolution& balanced) {
  const std::size_t n = balanced.plan_hat.rows() - 1;
  const std::size_t m = balanced.plan_hat.cols() - 1;
  DenseMatrix block(n, m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) block(i, j) = balanced.plan_hat(i, j);
  return TransportPlan::from_matrix(std::move(block));
}

DualPotentials recover_duals(const BalancedSolution& balanced,
                             const AugmentedProblem& problem) {
  const std::size_t n = problem.mu_hat.size() - 1;
  const std::size_t m = problem.nu_hat.size() - 1;
  const double shift = balanced.node_potentials_u[n];

  DualPotentials duals;
  duals.phi.resize(n);
  duals.psi.resize(m);
  for (std::size_t i = 0; i < n; ++i)
    duals.phi[i] = std::min(0.0, balanced.node_potentials_u[i] - shift);
  for (std::size_t j = 0; j < m; ++j)
    duals.psi[j] = std::min(0.0, balanced.node_potentials_v[j] + shift);

  const double scale = std::max(1.0, problem.c_hat.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (duals.phi[i] + duals.psi[j] > problem.c_hat(i, j) + kDefaultTol * scale)
        throw CertificationError("recovered potentials violate phi_i + psi_j <= c_ij at (" +
                                 std::to_string(i) + ", " + std::to_string(j) + ")");

  double primal = 0.0;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= m; ++j)
      primal += balanced.plan_hat(i, j) * problem.c_hat(i, j);
  double dual = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (problem.mu_hat[i] > 0.0) dual += duals.phi[i] * problem.mu_hat[i];
  for (std::size_t j = 0; j < m; ++j)
    if (problem.nu_hat[j] > 0.0) dual += duals.psi[j] * problem.nu_hat[j];

  if (std::abs(primal - dual) > kCertificationTol * scale)
    throw CertificationError("duality gap " + std::to_string(std::abs(primal - dual)) +
                             " exceeds certification tolerance");
  return duals;
}

SolveReport solve_aot_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            const CostMatrix& C) {
  AugmentedProblem problem = augment(mu, nu, C);
  BalancedSolution balanced = solve_balanced(problem);

  SolveReport report;
  report.method = "aot-exact";
  report.plan = restrict_plan(balanced);
  report.marginals = summarize_plan(report.plan, C, mu, nu);
  report.duals = recover_duals(balanced, problem);
  report.iterations = balanced.pivots;

  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) report.dual_value += report.duals.phi[i] * mu[i];
  for (std::size_t j = 0; j < nu.size(); ++j)
    if (nu[j] > 0.0) report.dual_value += report.duals.psi[j] * nu[j];
  report.duality_gap = std::abs(report.marginals.objective - report.dual_value);
  return report;
}

}  // namespace aot
