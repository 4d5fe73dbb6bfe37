#ifndef AOT_ANALYSIS_HPP
#define AOT_ANALYSIS_HPP

#include <cstddef>
#include <vector>

#include "aot/measures.hpp"

namespace aot {

/// Plan mass found on a strictly-positive-cost pair.
struct MassViolation {
  std::size_t row = 0;
  std::size_t col = 0;
  double mass = 0.0;
};

/// Strictly-negative-cost pair whose row and column are both unsaturated.
struct UnsaturatedPair {
  std::size_t row = 0;
  std::size_t col = 0;
};

/// Mass-allocation audit: optimal plans ship nothing at positive cost,
/// and every negative-cost pair saturates its row or its column.
struct TheoremOneReport {
  std::vector<MassViolation> positive_violations;
  std::vector<UnsaturatedPair> negative_unsaturated;
  bool passed = false;
};

/// Support projections of a plan: atoms that ship mass somewhere.
struct ActiveRegions {
  std::vector<std::size_t> active_rows;
  std::vector<std::size_t> active_cols;
  std::vector<std::size_t> inactive_rows;
  std::vector<std::size_t> inactive_cols;
  double active_mass = 0.0;  ///< equals total plan mass by construction
};

/// Feasibility and value of a candidate dual pair against a primal value.
struct DualReport {
  bool feasible = false;
  double dual_value = 0.0;
  double gap = 0.0;  ///< primal - dual; nonnegative under weak duality
};

/// One point of the cost-shift mass curve.
struct ShiftPoint {
  double t = 0.0;
  double mass = 0.0;
  double objective = 0.0;  ///< optimal value on the shifted cost C - t
};

/// Direction of the infimal transform.
enum class TransformSide { kRowToCol, kColToRow };

/// Classifies atoms: a row is active iff some entry in it exceeds tol.
ActiveRegions active_regions(const TransportPlan& plan, double tol = kDefaultTol);

/// Audits the mass-allocation conditions on a feasible plan; zero-cost
/// pairs are exempt (shipping there is optional either way).
TheoremOneReport check_mass_allocation(const TransportPlan& plan, const CostMatrix& C,
                                       const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu,
                                       double tol = kDefaultTol);

/// Infimal transform of a potential against the cost:
/// row-to-col maps phi to psi_j = min_i(c_ij - phi_i), col-to-row the
/// transpose. The result is the tightest partner potential.
std::vector<double> transform(const std::vector<double>& potential,
                              const CostMatrix& C, TransformSide side);

/// Checks phi, psi <= 0 and phi_i + psi_j <= c_ij within tol; reports the
/// dual value and the gap against a primal objective.
DualReport dual_report(const std::vector<double>& phi, const std::vector<double>& psi,
                       const CostMatrix& C, const DiscreteMeasure& mu,
                       const DiscreteMeasure& nu, double primal_objective,
                       double tol = kDefaultTol);

/// Single-potential dual value: sum phi mu + sum min(phi^c, 0) nu.
/// Requires phi <= 0 pointwise.
double semidual_value(const std::vector<double>& phi, const CostMatrix& C,
                      const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Solves the exact problem on C - t for each grid point; transported
/// mass is nondecreasing in t.
std::vector<ShiftPoint> mass_shift_curve(const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu, const CostMatrix& C,
                                         const std::vector<double>& t_grid);

}  // namespace aot

#endif  // AOT_ANALYSIS_HPP
