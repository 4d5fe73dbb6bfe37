#include "aot/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aot/errors.hpp"
#include "aot/exact.hpp"
#include "aot/transport_simplex.hpp"

namespace aot {

SolveReport solve_kantorovich(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const CostMatrix& C) {
  if (mu.size() != C.rows() || nu.size() != C.cols())
    throw ShapeError("cost is " + std::to_string(C.rows()) + "x" +
                     std::to_string(C.cols()) + " but measures have " +
                     std::to_string(mu.size()) + " and " + std::to_string(nu.size()) +
                     " atoms");
  if (std::abs(mu.total() - nu.total()) > kDefaultTol * std::max(1.0, mu.total()))
    throw BalanceError("equality-constrained transport needs balanced totals, got " +
                       std::to_string(mu.total()) + " and " + std::to_string(nu.total()));

  TableauSolution tableau = solve_transport(mu.weights(), nu.weights(), C.entries());

  SolveReport report;
  report.method = "ot";
  report.plan = TransportPlan::from_matrix(std::move(tableau.flow));
  report.marginals = summarize_plan(report.plan, C, mu, nu);
  report.duals.phi = std::move(tableau.row_duals);
  report.duals.psi = std::move(tableau.col_duals);
  report.iterations = tableau.pivots;
  for (std::size_t i = 0; i < mu.size(); ++i)
    report.dual_value += report.duals.phi[i] * mu[i];
  for (std::size_t j = 0; j < nu.size(); ++j)
    report.dual_value += report.duals.psi[j] * nu[j];
  report.duality_gap = std::abs(report.marginals.objective - report.dual_value);
  return report;
}

SolveReport solve_pot(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const PotSpec& spec) {
  const CostMatrix& C = spec.cost;
  if (mu.size() != C.rows() || nu.size() != C.cols())
    throw ShapeError("cost is " + std::to_string(C.rows()) + "x" +
                     std::to_string(C.cols()) + " but measures have " +
                     std::to_string(mu.size()) + " and " + std::to_string(nu.size()) +
                     " atoms");
  if (C.min_entry() < 0.0)
    throw ValidationError("partial transport requires a nonnegative cost");
  const double min_total = std::min(mu.total(), nu.total());
  const double m = spec.mass_budget;
  if (!(m >= 0.0) || m > min_total + kDefaultTol * std::max(1.0, min_total))
    throw ValidationError("mass budget " + std::to_string(m) + " outside [0, " +
                          std::to_string(min_total) + "]");
  const double budget = std::min(m, min_total);

  const std::size_t n = mu.size(), mm = nu.size();
  std::vector<double> supply = mu.weights();
  supply.push_back(std::max(0.0, nu.total() - budget));
  std::vector<double> demand = nu.weights();
  demand.push_back(std::max(0.0, mu.total() - budget));

  DenseMatrix bordered(n + 1, mm + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < mm; ++j) bordered(i, j) = C(i, j);
  bordered(n, mm) = 2.0 * C.max_abs() + 1.0;  // forbid corner shipment

  TableauSolution tableau = solve_transport(supply, demand, bordered);

  DenseMatrix block(n, mm, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < mm; ++j) block(i, j) = tableau.flow(i, j);

  SolveReport report;
  report.method = "pot";
  report.plan = TransportPlan::from_matrix(std::move(block));
  report.marginals = summarize_plan(report.plan, C, mu, nu);
  report.iterations = tableau.pivots;
  return report;
}

std::vector<LambdaPoint> pot_lambda_sweep(const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu,
                                          const CostMatrix& c_plus,
                                          const std::vector<double>& lambda_grid) {
  if (c_plus.min_entry() < 0.0)
    throw ValidationError("lambda sweep requires a nonnegative cost");
  for (double lambda : lambda_grid)
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
      throw ValidationError("lambda values must be finite and nonnegative");

  std::vector<LambdaPoint> points;
  points.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    SolveReport report = solve_aot_exact(mu, nu, c_plus.shifted(-lambda));
    points.push_back({lambda, report.mass(), report.objective()});
  }
  return points;
}

}  // namespace aot
