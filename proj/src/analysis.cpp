#include "aot/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aot/errors.hpp"
#include "aot/exact.hpp"

namespace aot {

ActiveRegions active_regions(const TransportPlan& plan, double tol) {
  ActiveRegions regions;
  regions.active_mass = plan.total_mass();
  for (std::size_t i = 0; i < plan.rows(); ++i) {
    bool active = false;
    for (std::size_t j = 0; j < plan.cols(); ++j)
      if (plan(i, j) > tol) {
        active = true;
        break;
      }
    (active ? regions.active_rows : regions.inactive_rows).push_back(i);
  }
  for (std::size_t j = 0; j < plan.cols(); ++j) {
    bool active = false;
    for (std::size_t i = 0; i < plan.rows(); ++i)
      if (plan(i, j) > tol) {
        active = true;
        break;
      }
    (active ? regions.active_cols : regions.inactive_cols).push_back(j);
  }
  return regions;
}

TheoremOneReport check_mass_allocation(const TransportPlan& plan, const CostMatrix& C,
                                       const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu, double tol) {
  MarginalReport marginals = summarize_plan(plan, C, mu, nu, tol);
  if (!marginals.feasible())
    throw ValidationError("plan violates the marginal constraints by " +
                          std::to_string(marginals.max_violation));

  std::vector<char> row_saturated(plan.rows(), 0), col_saturated(plan.cols(), 0);
  for (std::size_t i : marginals.saturated_rows) row_saturated[i] = 1;
  for (std::size_t j : marginals.saturated_cols) col_saturated[j] = 1;

  TheoremOneReport report;
  for (std::size_t i = 0; i < plan.rows(); ++i)
    for (std::size_t j = 0; j < plan.cols(); ++j) {
      if (C(i, j) > 0.0 && plan(i, j) > tol)
        report.positive_violations.push_back({i, j, plan(i, j)});
      if (C(i, j) < 0.0 && !row_saturated[i] && !col_saturated[j])
        report.negative_unsaturated.push_back({i, j});
    }
  report.passed =
      report.positive_violations.empty() && report.negative_unsaturated.empty();
  return report;
}

std::vector<double> transform(const std::vector<double>& potential,
                              const CostMatrix& C, TransformSide side) {
  const bool row_to_col = side == TransformSide::kRowToCol;
  const std::size_t expect = row_to_col ? C.rows() : C.cols();
  if (potential.size() != expect)
    throw ShapeError("potential has " + std::to_string(potential.size()) +
                     " entries, expected " + std::to_string(expect));

  const std::size_t out_len = row_to_col ? C.cols() : C.rows();
  std::vector<double> out(out_len, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < C.rows(); ++i)
    for (std::size_t j = 0; j < C.cols(); ++j) {
      if (row_to_col)
        out[j] = std::min(out[j], C(i, j) - potential[i]);
      else
        out[i] = std::min(out[i], C(i, j) - potential[j]);
    }
  return out;
}

DualReport dual_report(const std::vector<double>& phi, const std::vector<double>& psi,
                       const CostMatrix& C, const DiscreteMeasure& mu,
                       const DiscreteMeasure& nu, double primal_objective, double tol) {
  if (phi.size() != C.rows() || psi.size() != C.cols())
    throw ShapeError("potentials have " + std::to_string(phi.size()) + " and " +
                     std::to_string(psi.size()) + " entries, cost is " +
                     std::to_string(C.rows()) + "x" + std::to_string(C.cols()));
  if (mu.size() != C.rows() || nu.size() != C.cols())
    throw ShapeError("measure sizes do not match the cost");

  DualReport report;
  report.feasible = true;
  for (double p : phi)
    if (p > tol) report.feasible = false;
  for (double p : psi)
    if (p > tol) report.feasible = false;
  for (std::size_t i = 0; i < C.rows() && report.feasible; ++i)
    for (std::size_t j = 0; j < C.cols(); ++j)
      if (phi[i] + psi[j] > C(i, j) + tol) {
        report.feasible = false;
        break;
      }
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) report.dual_value += phi[i] * mu[i];
  for (std::size_t j = 0; j < nu.size(); ++j)
    if (nu[j] > 0.0) report.dual_value += psi[j] * nu[j];
  report.gap = primal_objective - report.dual_value;
  return report;
}

double semidual_value(const std::vector<double>& phi, const CostMatrix& C,
                      const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (phi.size() != C.rows())
    throw ShapeError("potential has " + std::to_string(phi.size()) +
                     " entries, cost has " + std::to_string(C.rows()) + " rows");
  if (mu.size() != C.rows() || nu.size() != C.cols())
    throw ShapeError("measure sizes do not match the cost");
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (phi[i] > 0.0)
      throw ValidationError("potential entry " + std::to_string(i) + " is positive");

  const std::vector<double> phi_c = transform(phi, C, TransformSide::kRowToCol);
  double value = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) value += phi[i] * mu[i];
  for (std::size_t j = 0; j < nu.size(); ++j)
    if (nu[j] > 0.0) value += std::min(phi_c[j], 0.0) * nu[j];
  return value;
}

std::vector<ShiftPoint> mass_shift_curve(const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu, const CostMatrix& C,
                                         const std::vector<double>& t_grid) {
  for (double t : t_grid)
    if (!std::isfinite(t)) throw ValidationError("shift grid values must be finite");

  std::vector<ShiftPoint> points;
  points.reserve(t_grid.size());
  for (double t : t_grid) {
    SolveReport report = solve_aot_exact(mu, nu, C.shifted(-t));
    points.push_back({t, report.mass(), report.objective()});
  }
  return points;
}

}  // namespace aot
