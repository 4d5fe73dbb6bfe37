#ifndef AOT_ENTROPIC_HPP
#define AOT_ENTROPIC_HPP

#include "aot/measures.hpp"

namespace aot {

/// Parameters of the entropy-regularized solver.
struct SinkhornConfig {
  double epsilon = 0.1;   ///< entropic coefficient, > 0
  double tol = 1e-7;      ///< max marginal overflow and potential sup-change
  long max_iter = 10000;  ///< sweeps before giving up
};

/// Entropy-regularized solver: alternating log-domain potential updates
/// with pointwise clipping at 0, so that phi <= 0 and psi <= 0 hold at
/// every iterate.
///
/// The plan is gamma_ij = exp((phi_i + psi_j - c_ij) / epsilon). A row
/// update sets the row sum to mu_i, then clips phi_i at 0; columns are
/// symmetric. Zero-weight atoms get a -inf potential (zero plan row).
/// Iteration stops once the worst marginal overflow and the potential
/// sup-change both drop to config.tol; hitting max_iter first raises
/// ConvergenceError carrying the last residual.
///
/// The reported objective is the linear cost <gamma, C>; the regularized
/// value <gamma, C> + epsilon * sum gamma (log gamma - 1) is reported
/// separately as entropic_value.
SolveReport solve_aot_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const CostMatrix& C, const SinkhornConfig& config);

}  // namespace aot

#endif  // AOT_ENTROPIC_HPP
