#include "aot/transport_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "aot/errors.hpp"

namespace aot {
namespace {

constexpr long kBlandTrigger = 24;  // consecutive degenerate pivots

struct Cell {
  int i;
  int j;
};

bool lex_less(const Cell& a, const Cell& b) {
  return a.i != b.i ? a.i < b.i : a.j < b.j;
}

class Tableau {
 public:
  Tableau(const std::vector<double>& supply, const std::vector<double>& demand,
          const DenseMatrix& cost)
      : R_(static_cast<int>(supply.size())),
        S_(static_cast<int>(demand.size())),
        cost_(cost),
        flow_(supply.size(), demand.size(), 0.0),
        basic_(supply.size() * demand.size(), 0),
        row_adj_(supply.size()),
        col_adj_(demand.size()),
        u_(supply.size(), 0.0),
        v_(demand.size(), 0.0) {
    double max_abs_cost = 0.0;
    for (std::size_t k = 0; k < cost.size(); ++k)
      max_abs_cost = std::max(max_abs_cost, std::abs(cost.data()[k]));
    threshold_ = 1e-11 * std::max(1.0, max_abs_cost);
    north_west_corner(supply, demand);
  }

  TableauSolution run() {
    const long pivot_limit = 50L * R_ * S_;
    long pivots = 0;
    long degenerate_run = 0;
    while (true) {
      compute_duals();
      Cell enter{-1, -1};
      if (!select_entering(degenerate_run >= kBlandTrigger, &enter)) break;
      if (pivots >= pivot_limit)
        throw ConvergenceError("transportation simplex exceeded pivot limit of " +
                               std::to_string(pivot_limit));
      const bool degenerate = pivot(enter);
      ++pivots;
      degenerate_run = degenerate ? degenerate_run + 1 : 0;
    }
    TableauSolution out;
    out.flow = std::move(flow_);
    out.row_duals = std::move(u_);
    out.col_duals = std::move(v_);
    out.pivots = pivots;
    return out;
  }

 private:
  bool is_basic(int i, int j) const { return basic_[std::size_t(i) * S_ + j] != 0; }

  void add_basic(int i, int j) {
    basic_[std::size_t(i) * S_ + j] = 1;
    row_adj_[i].push_back(j);
    col_adj_[j].push_back(i);
  }

  void remove_basic(int i, int j) {
    basic_[std::size_t(i) * S_ + j] = 0;
    auto& rj = row_adj_[i];
    rj.erase(std::find(rj.begin(), rj.end(), j));
    auto& ci = col_adj_[j];
    ci.erase(std::find(ci.begin(), ci.end(), i));
  }

  // Marks R+S-1 cells, advancing exactly one of the two pointers per step.
  void north_west_corner(std::vector<double> ra, std::vector<double> cb) {
    int i = 0, j = 0;
    const int steps = R_ + S_ - 1;
    for (int step = 0; step < steps; ++step) {
      const double x = std::min(ra[i], cb[j]);
      flow_(i, j) = x;
      add_basic(i, j);
      ra[i] -= x;
      cb[j] -= x;
      if (i == R_ - 1)
        ++j;
      else if (j == S_ - 1)
        ++i;
      else if (ra[i] <= cb[j])
        ++i;
      else
        ++j;
    }
  }

  // The basis is a spanning tree of the bipartite node graph; one pass
  // from row node 0 determines all potentials given u[0] = 0.
  void compute_duals() {
    seen_.assign(std::size_t(R_) + S_, 0);
    stack_.clear();
    stack_.push_back(0);
    seen_[0] = 1;
    u_[0] = 0.0;
    while (!stack_.empty()) {
      const int node = stack_.back();
      stack_.pop_back();
      if (node < R_) {
        for (int j : row_adj_[node])
          if (!seen_[R_ + j]) {
            v_[j] = cost_(node, j) - u_[node];
            seen_[R_ + j] = 1;
            stack_.push_back(R_ + j);
          }
      } else {
        const int j = node - R_;
        for (int i : col_adj_[j])
          if (!seen_[i]) {
            u_[i] = cost_(i, j) - v_[j];
            seen_[i] = 1;
            stack_.push_back(i);
          }
      }
    }
  }

  bool select_entering(bool bland, Cell* enter) const {
    double best = -threshold_;
    for (int i = 0; i < R_; ++i)
      for (int j = 0; j < S_; ++j) {
        if (is_basic(i, j)) continue;
        const double d = cost_(i, j) - u_[i] - v_[j];
        if (d < best) {
          *enter = {i, j};
          if (bland) return true;  // first eligible in row-major order
          best = d;
        }
      }
    return enter->i >= 0;
  }

  // Adds the entering arc, shifts flow around the unique tree cycle and
  // drops the lex-lowest minimizing arc. Returns true for a zero-step pivot.
  bool pivot(Cell enter) {
    find_tree_path(enter.i, R_ + enter.j);
    // Path nodes alternate row, col, ..., col; the incident cells get
    // signs -, +, -, ... starting next to the entering row.
    plus_.clear();
    minus_.clear();
    for (std::size_t t = 0; t + 1 < path_.size(); ++t) {
      const int a = path_[t], b = path_[t + 1];
      const Cell cell = a < R_ ? Cell{a, b - R_} : Cell{b, a - R_};
      if (t % 2 == 0)
        minus_.push_back(cell);
      else
        plus_.push_back(cell);
    }
    double theta = std::numeric_limits<double>::infinity();
    Cell leave{-1, -1};
    for (const Cell& c : minus_) {
      const double f = flow_(c.i, c.j);
      if (f < theta || (f == theta && lex_less(c, leave))) {
        theta = f;
        leave = c;
      }
    }
    for (const Cell& c : plus_) flow_(c.i, c.j) += theta;
    for (const Cell& c : minus_)
      flow_(c.i, c.j) = std::max(0.0, flow_(c.i, c.j) - theta);
    flow_(enter.i, enter.j) = theta;
    flow_(leave.i, leave.j) = 0.0;
    remove_basic(leave.i, leave.j);
    add_basic(enter.i, enter.j);
    return theta <= 0.0;
  }

  void find_tree_path(int from_row, int to_node) {
    parent_.assign(std::size_t(R_) + S_, -1);
    parent_[from_row] = from_row;
    stack_.clear();
    stack_.push_back(from_row);
    while (!stack_.empty()) {
      const int node = stack_.back();
      stack_.pop_back();
      if (node == to_node) break;
      if (node < R_) {
        for (int j : row_adj_[node])
          if (parent_[R_ + j] < 0) {
            parent_[R_ + j] = node;
            stack_.push_back(R_ + j);
          }
      } else {
        for (int i : col_adj_[node - R_])
          if (parent_[i] < 0) {
            parent_[i] = node;
            stack_.push_back(i);
          }
      }
    }
    path_.clear();
    for (int node = to_node; node != from_row; node = parent_[node])
      path_.push_back(node);
    path_.push_back(from_row);
    std::reverse(path_.begin(), path_.end());
  }

  int R_, S_;
  const DenseMatrix& cost_;
  DenseMatrix flow_;
  std::vector<char> basic_;
  std::vector<std::vector<int>> row_adj_, col_adj_;
  std::vector<double> u_, v_;
  double threshold_ = 0.0;
  // per-pivot scratch
  std::vector<char> seen_;
  std::vector<int> stack_, parent_, path_;
  std::vector<Cell> plus_, minus_;
};

}  // namespace

TableauSolution solve_transport(const std::vector<double>& supply,
                                const std::vector<double>& demand,
                                const DenseMatrix& cost) {
  if (supply.empty() || demand.empty())
    throw ValidationError("transportation problem must have at least one source and one sink");
  if (cost.rows() != supply.size() || cost.cols() != demand.size())
    throw ShapeError("cost is " + std::to_string(cost.rows()) + "x" +
                     std::to_string(cost.cols()) + " but problem is " +
                     std::to_string(supply.size()) + "x" + std::to_string(demand.size()));
  double total_supply = 0.0, total_demand = 0.0;
  for (double s : supply) {
    if (!std::isfinite(s) || s < 0.0)
      throw ValidationError("supplies must be finite and nonnegative");
    total_supply += s;
  }
  for (double d : demand) {
    if (!std::isfinite(d) || d < 0.0)
      throw ValidationError("demands must be finite and nonnegative");
    total_demand += d;
  }
  for (std::size_t k = 0; k < cost.size(); ++k)
    if (!std::isfinite(cost.data()[k]))
      throw ValidationError("costs must be finite");
  if (std::abs(total_supply - total_demand) > 1e-9 * std::max(1.0, total_supply))
    throw BalanceError("total supply " + std::to_string(total_supply) +
                       " does not match total demand " + std::to_string(total_demand));

  Tableau tableau(supply, demand, cost);
  return tableau.run();
}

}  // namespace aot
