#ifndef AOT_EXACT_HPP
#define AOT_EXACT_HPP

#include <vector>

#include "aot/measures.hpp"

namespace aot {

/// Tolerance for certifying that recovered duals attain the primal value.
inline constexpr double kCertificationTol = 1e-7;

/// Balanced transportation problem with one extra sink and source atom
/// absorbing whatever mass the original problem leaves unmoved.
struct AugmentedProblem {
  DiscreteMeasure mu_hat;  ///< [mu, total(nu)]
  DiscreteMeasure nu_hat;  ///< [nu, total(mu)]
  CostMatrix c_hat;        ///< original costs bordered by a zero row and column
};

/// Optimal basic solution of the augmented problem.
struct BalancedSolution {
  TransportPlan plan_hat;
  std::vector<double> node_potentials_u;
  std::vector<double> node_potentials_v;
  long pivots = 0;
};

/// Borders the problem with a free disposal atom on each side.
///
/// The augmented marginals both total total(mu) + total(nu), so the
/// equality-constrained problem is balanced, and its optimal value equals
/// the partial problem's because the border arcs cost nothing.
AugmentedProblem augment(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const CostMatrix& C);

/// Solves the augmented problem with the transportation simplex.
BalancedSolution solve_balanced(const AugmentedProblem& problem);

/// Drops the border row and column, leaving a plan with inequality
/// marginals against the original (mu, nu).
TransportPlan restrict_plan(const BalancedSolution& balanced);

/// Recovers nonpositive dual potentials from the simplex node potentials.
///
/// Shifts so the border source potential is 0, then clips pointwise at 0.
/// At optimality the clip cannot change the attained value; the result is
/// certified dual-feasible and equal to the primal objective within tol,
/// otherwise CertificationError is thrown.
DualPotentials recover_duals(const BalancedSolution& balanced,
                             const AugmentedProblem& problem);

/// Exact solver: augment, solve balanced, restrict, certify duals.
SolveReport solve_aot_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            const CostMatrix& C);

}  // namespace aot

#endif  // AOT_EXACT_HPP
