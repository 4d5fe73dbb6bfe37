#ifndef AOT_MEASURES_HPP
#define AOT_MEASURES_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "aot/dense.hpp"
#include "aot/errors.hpp"

namespace aot {

/// Default saturation/feasibility tolerance in mass units.
inline constexpr double kDefaultTol = 1e-9;

/// Nonnegative weight vector over indexed atoms.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Validates nonnegativity and finiteness of every weight.
  explicit DiscreteMeasure(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total() const { return total_; }

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Dense per-unit transport cost matrix; mixed sign allowed.
class CostMatrix {
 public:
  CostMatrix() = default;
  /// Validates that every entry is finite.
  explicit CostMatrix(DenseMatrix entries);

  std::size_t rows() const { return entries_.rows(); }
  std::size_t cols() const { return entries_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  const DenseMatrix& entries() const { return entries_; }

  /// Largest negated entry, clamped below at 0: max(0, max_ij -c_ij).
  double lambda_c() const { return lambda_c_; }
  double min_entry() const { return min_entry_; }
  double max_entry() const { return max_entry_; }
  double max_abs() const;

  /// Returns a copy with `delta` added to every entry.
  CostMatrix shifted(double delta) const;

 private:
  DenseMatrix entries_;
  double lambda_c_ = 0.0;
  double min_entry_ = 0.0;
  double max_entry_ = 0.0;
};

/// Nonnegative shipped-mass matrix with cached marginals and total mass.
///
/// Construction does not enforce feasibility against any marginals; use
/// summarize_plan to audit a plan against (mu, nu).
class TransportPlan {
 public:
  TransportPlan() = default;
  /// Validates finiteness; computes row/column marginals and total mass.
  static TransportPlan from_matrix(DenseMatrix mass);

  std::size_t rows() const { return mass_.rows(); }
  std::size_t cols() const { return mass_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return mass_(i, j); }
  const DenseMatrix& mass_matrix() const { return mass_; }
  const std::vector<double>& row_marginals() const { return row_marginals_; }
  const std::vector<double>& col_marginals() const { return col_marginals_; }
  double total_mass() const { return total_mass_; }
  bool empty() const { return mass_.empty(); }

 private:
  DenseMatrix mass_;
  std::vector<double> row_marginals_;
  std::vector<double> col_marginals_;
  double total_mass_ = 0.0;
};

/// Per-atom dual potential vectors phi (rows) and psi (columns).
///
/// Feasibility for the inequality-constrained dual additionally requires
/// phi <= 0, psi <= 0 and phi_i + psi_j <= c_ij; it is checked by
/// dual_report, never enforced at construction.
struct DualPotentials {
  std::vector<double> phi;
  std::vector<double> psi;

  bool empty() const { return phi.empty() && psi.empty(); }
};

/// Feasibility and saturation audit of a plan against (mu, nu, C).
struct MarginalReport {
  double objective = 0.0;  ///< Frobenius inner product <plan, C>.
  double mass = 0.0;       ///< total plan mass
  std::vector<double> row_slack;  ///< mu_i - row sum
  std::vector<double> col_slack;  ///< nu_j - column sum
  std::vector<std::size_t> saturated_rows;  ///< indices with slack <= tol
  std::vector<std::size_t> saturated_cols;
  double max_violation = 0.0;  ///< max of negative slacks and negative entries
  double tol = kDefaultTol;    ///< tolerance the report was computed with

  bool feasible() const { return max_violation <= tol; }
};

/// Outcome of one solver run: plan, audit, dual certificate, counters.
struct SolveReport {
  std::string method;
  TransportPlan plan;
  MarginalReport marginals;
  DualPotentials duals;          ///< empty when the method yields none
  double dual_value = 0.0;
  double duality_gap = 0.0;
  long iterations = 0;           ///< simplex pivots or Sinkhorn sweeps
  double epsilon = 0.0;          ///< entropic coefficient, 0 for exact methods
  double entropic_value = 0.0;   ///< objective + eps * sum(g (log g - 1)); entropic only
  std::vector<double> residual_history;  ///< per-iteration residuals; entropic only

  double objective() const { return marginals.objective; }
  double mass() const { return marginals.mass; }
};

DiscreteMeasure make_measure(std::vector<double> weights);

CostMatrix make_cost(const std::vector<std::vector<double>>& rows);

/// Audits `plan` against cost C and marginals (mu, nu) at tolerance tol.
MarginalReport summarize_plan(const TransportPlan& plan, const CostMatrix& C,
                              const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              double tol = kDefaultTol);

}  // namespace aot

#endif  // AOT_MEASURES_HPP
