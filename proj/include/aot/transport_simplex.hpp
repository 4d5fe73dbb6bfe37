#ifndef AOT_TRANSPORT_SIMPLEX_HPP
#define AOT_TRANSPORT_SIMPLEX_HPP

#include <vector>

#include "aot/dense.hpp"

namespace aot {

/// Optimal basic solution of a balanced transportation problem.
struct TableauSolution {
  DenseMatrix flow;               ///< shipped amounts, R x S
  std::vector<double> row_duals;  ///< simplex node potentials u
  std::vector<double> col_duals;  ///< simplex node potentials v
  long pivots = 0;
};

/// Solves min <flow, cost> over flow >= 0 with row sums = supply and
/// column sums = demand (totals must balance).
///
/// Bipartite network simplex on the dense tableau, starting from the
/// north-west-corner basis. Entering arc is the most negative reduced
/// cost, lowest (row, column) on ties; after a run of degenerate pivots
/// the selection falls back to Bland's rule, which rules out cycling.
/// Duals are recomputed each pivot by traversing the basis tree.
///
/// Throws ValidationError on negative or non-finite inputs, BalanceError
/// when totals disagree, ConvergenceError past 50*R*S pivots.
TableauSolution solve_transport(const std::vector<double>& supply,
                                const std::vector<double>& demand,
                                const DenseMatrix& cost);

}  // namespace aot

#endif  // AOT_TRANSPORT_SIMPLEX_HPP
