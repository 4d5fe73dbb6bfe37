#ifndef AOT_BASELINES_HPP
#define AOT_BASELINES_HPP

#include <vector>

#include "aot/measures.hpp"

namespace aot {

/// Fixed-mass partial transport instance: ship exactly mass_budget units
/// under a nonnegative cost.
struct PotSpec {
  double mass_budget = 0.0;
  CostMatrix cost;
};

/// One point of a Lagrangian sweep: solve on cost - lambda, record mass.
struct LambdaPoint {
  double lambda = 0.0;
  double mass = 0.0;
  double objective = 0.0;
};

/// Full-mass transport with equality marginals, solved directly on C.
///
/// Requires total(mu) = total(nu) within tolerance (BalanceError). The
/// reported duals are the simplex node potentials, feasible for the
/// equality-constrained dual (no sign restriction).
SolveReport solve_kantorovich(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const CostMatrix& C);

/// Partial transport at a fixed mass budget.
///
/// Reduction: border the problem with a dummy source of mass
/// total(nu) - m and a dummy sink of mass total(mu) - m, zero-cost dummy
/// arcs, and a dummy-dummy corner priced at 2*max|c|+1 so the corner
/// never ships and the restricted plan carries exactly m.
SolveReport solve_pot(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const PotSpec& spec);

/// Solves min <gamma, c_plus - lambda> over the inequality-constrained
/// plans for each lambda in the grid; transported mass is nondecreasing
/// in lambda.
std::vector<LambdaPoint> pot_lambda_sweep(const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu,
                                          const CostMatrix& c_plus,
                                          const std::vector<double>& lambda_grid);

}  // namespace aot

#endif  // AOT_BASELINES_HPP
