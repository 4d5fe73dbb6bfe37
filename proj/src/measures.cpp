#include "aot/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aot {

DiscreteMeasure::DiscreteMeasure(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("measure must have at least one atom");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w))
      throw ValidationError("measure weight " + std::to_string(i) + " is not finite");
    if (w < 0.0)
      throw ValidationError("measure weight " + std::to_string(i) + " is negative");
    total_ += w;
  }
}

CostMatrix::CostMatrix(DenseMatrix entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("cost matrix must be non-empty");
  min_entry_ = std::numeric_limits<double>::infinity();
  max_entry_ = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const double c = entries_.data()[k];
    if (!std::isfinite(c)) throw ValidationError("cost matrix entry is not finite");
    min_entry_ = std::min(min_entry_, c);
    max_entry_ = std::max(max_entry_, c);
  }
  lambda_c_ = std::max(0.0, -min_entry_);
}

double CostMatrix::max_abs() const {
  return std::max(std::abs(min_entry_), std::abs(max_entry_));
}

CostMatrix CostMatrix::shifted(double delta) const {
  DenseMatrix out = entries_;
  for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] += delta;
  return CostMatrix(std::move(out));
}

TransportPlan TransportPlan::from_matrix(DenseMatrix mass) {
  if (mass.empty()) throw ValidationError("transport plan must be non-empty");
  TransportPlan plan;
  plan.row_marginals_.assign(mass.rows(), 0.0);
  plan.col_marginals_.assign(mass.cols(), 0.0);
  for (std::size_t i = 0; i < mass.rows(); ++i) {
    for (std::size_t j = 0; j < mass.cols(); ++j) {
      const double g = mass(i, j);
      if (!std::isfinite(g)) throw ValidationError("plan entry is not finite");
      plan.row_marginals_[i] += g;
      plan.col_marginals_[j] += g;
      plan.total_mass_ += g;
    }
  }
  plan.mass_ = std::move(mass);
  return plan;
}

DiscreteMeasure make_measure(std::vector<double> weights) {
  return DiscreteMeasure(std::move(weights));
}

CostMatrix make_cost(const std::vector<std::vector<double>>& rows) {
  return CostMatrix(DenseMatrix::from_rows(rows));
}

MarginalReport summarize_plan(const TransportPlan& plan, const CostMatrix& C,
                              const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              double tol) {
  if (plan.rows() != C.rows() || plan.cols() != C.cols())
    throw ShapeError("plan is " + std::to_string(plan.rows()) + "x" +
                     std::to_string(plan.cols()) + " but cost is " +
                     std::to_string(C.rows()) + "x" + std::to_string(C.cols()));
  if (mu.size() != plan.rows())
    throw ShapeError("row measure has " + std::to_string(mu.size()) +
                     " atoms, plan has " + std::to_string(plan.rows()) + " rows");
  if (nu.size() != plan.cols())
    throw ShapeError("column measure has " + std::to_string(nu.size()) +
                     " atoms, plan has " + std::to_string(plan.cols()) + " columns");

  MarginalReport report;
  report.tol = tol;
  report.mass = plan.total_mass();
  report.row_slack.resize(plan.rows());
  report.col_slack.resize(plan.cols());

  for (std::size_t i = 0; i < plan.rows(); ++i)
    for (std::size_t j = 0; j < plan.cols(); ++j) {
      report.objective += plan(i, j) * C(i, j);
      if (plan(i, j) < 0.0)
        report.max_violation = std::max(report.max_violation, -plan(i, j));
    }

  for (std::size_t i = 0; i < plan.rows(); ++i) {
    const double slack = mu[i] - plan.row_marginals()[i];
    report.row_slack[i] = slack;
    if (slack <= tol) report.saturated_rows.push_back(i);
    if (slack < 0.0) report.max_violation = std::max(report.max_violation, -slack);
  }
  for (std::size_t j = 0; j < plan.cols(); ++j) {
    const double slack = nu[j] - plan.col_marginals()[j];
    report.col_slack[j] = slack;
    if (slack <= tol) report.saturated_cols.push_back(j);
    if (slack < 0.0) report.max_violation = std::max(report.max_violation, -slack);
  }
  return report;
}

}  // namespace aot
