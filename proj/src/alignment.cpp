#include "aot/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "aot/entropic.hpp"
#include "aot/errors.hpp"
#include "aot/exact.hpp"

namespace aot {
namespace {

// The constellation sits off the rotation origin, so a rigid rotation
// displaces every blob while the class spacing stays fixed.
constexpr double kBlobRadius = 8.0;
constexpr double kBlobStd = 0.8;
constexpr double kBlobOffsetX = 8.0;
constexpr double kBlobOffsetY = 0.0;

void rotate_xy(double* row, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double x = row[0], y = row[1];
  row[0] = c * x - s * y;
  row[1] = s * x + c * y;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count,
                                                    std::mt19937_64& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t(0));
  for (std::size_t t = 0; t < count; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, n - 1);
    std::swap(pool[t], pool[pick(rng)]);
  }
  pool.resize(count);
  return pool;
}

DenseMatrix gather_rows(const DenseMatrix& X, const std::vector<std::size_t>& idx) {
  DenseMatrix out(idx.size(), X.cols(), 0.0);
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t e = 0; e < X.cols(); ++e) out(r, e) = X(idx[r], e);
  return out;
}

DenseMatrix one_hot(const std::vector<int>& labels, const std::vector<std::size_t>& idx,
                    int num_classes) {
  DenseMatrix out(idx.size(), num_classes, 0.0);
  for (std::size_t r = 0; r < idx.size(); ++r) out(r, labels[idx[r]]) = 1.0;
  return out;
}

double mean_cross_entropy(const LinearClassifier& model, const DenseMatrix& xs,
                          const DenseMatrix& p) {
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.rows(); ++i) {
    const std::vector<double> q = model.probabilities(&xs.data()[i * xs.cols()]);
    for (std::size_t k = 0; k < p.cols(); ++k)
      if (p(i, k) > 0.0)
        loss -= p(i, k) * std::log(std::max(q[k], 1e-300));
  }
  return loss / static_cast<double>(xs.rows());
}

void check_train_config(const TrainConfig& config, int num_classes) {
  if (!(config.alpha >= 0.0) || !std::isfinite(config.alpha))
    throw ValidationError("alpha must be finite and nonnegative");
  if (!(config.beta >= 0.0) || !std::isfinite(config.beta))
    throw ValidationError("beta must be finite and nonnegative");
  if (!(config.epsilon >= 0.0) || !std::isfinite(config.epsilon))
    throw ValidationError("epsilon must be finite and nonnegative");
  if (!(config.lr > 0.0) || !std::isfinite(config.lr))
    throw ValidationError("lr must be finite and positive");
  if (config.iterations < 1) throw ValidationError("iterations must be at least 1");
  if (config.batch_source < num_classes)
    throw ValidationError("batch_source must be at least the class count");
  if (config.batch_source % num_classes != 0)
    throw ValidationError("batch_source must be a multiple of the class count");
  if (config.batch_target < 1) throw ValidationError("batch_target must be positive");
}

// Shared loop for the aligned trainer and the source-only baseline; both
// consume identical random draws so equal seeds see equal batches.
TrainResult run_training(const LabeledDataset& source, const LabeledDataset& target,
                         const TrainConfig& config, bool align) {
  if (!source.has_labels())
    throw ValidationError("source dataset must be labeled");
  if (source.labels.size() != source.size())
    throw ValidationError("source label count does not match feature rows");
  if (target.size() == 0) throw ValidationError("target dataset is empty");
  if (source.features.cols() != target.features.cols())
    throw ShapeError("source and target feature dimensions differ");
  const int K = source.num_classes;
  if (K < 2) throw ValidationError("need at least two classes");
  check_train_config(config, K);
  const std::size_t batch_target = static_cast<std::size_t>(config.batch_target);
  if (batch_target > target.size())
    throw SamplingError("batch_target " + std::to_string(batch_target) +
                        " exceeds target size " + std::to_string(target.size()));

  const int per_class = config.batch_source / K;
  const std::size_t d = source.features.cols();

  TrainResult result;
  result.model.weights = DenseMatrix(K, d, 0.0);
  result.model.bias.assign(K, 0.0);
  result.history.reserve(config.iterations);

  std::mt19937_64 rng(config.seed);
  for (int it = 1; it <= config.iterations; ++it) {
    const std::vector<std::size_t> src_idx =
        stratified_batch(source.labels, K, per_class, rng);
    const std::vector<std::size_t> tgt_idx =
        sample_without_replacement(target.size(), batch_target, rng);

    const DenseMatrix xs = gather_rows(source.features, src_idx);
    const DenseMatrix p = one_hot(source.labels, src_idx, K);

    TrainRecord record;
    record.source_class_mass.assign(K, 0.0);
    ParameterGradient grad{DenseMatrix(K, d, 0.0), std::vector<double>(K, 0.0)};

    if (align) {
      const DenseMatrix zs = gather_rows(target.features, tgt_idx);
      const DenseMatrix q = result.model.probabilities(zs);
      const CostMatrix cost =
          build_alignment_cost(xs, zs, p, q, config.alpha, config.beta);
      const DiscreteMeasure mu_b(std::vector<double>(
          xs.rows(), 1.0 / static_cast<double>(xs.rows())));
      const DiscreteMeasure nu_b(std::vector<double>(
          zs.rows(), 1.0 / static_cast<double>(zs.rows())));
      SolveReport solved;
      if (config.epsilon > 0.0) {
        SinkhornConfig sconf;
        sconf.epsilon = config.epsilon;
        // Batch plans feed a stochastic gradient step; marginal error well
        // below the step noise is enough. Tighter tolerances can stall for
        // thousands of sweeps when a clipped potential is marginally active.
        sconf.tol = 1e-4;
        sconf.max_iter = 20000;
        solved = solve_aot_sinkhorn(mu_b, nu_b, cost, sconf);
      } else {
        solved = solve_aot_exact(mu_b, nu_b, cost);
      }
      grad = fixed_plan_loss_grad(result.model, xs, p, zs, solved.plan, config.alpha,
                                  config.beta);
      record.mass = solved.mass();
      record.transport_cost = solved.objective();
      for (std::size_t i = 0; i < src_idx.size(); ++i)
        record.source_class_mass[source.labels[src_idx[i]]] +=
            solved.plan.row_marginals()[i];
    } else {
      // Same accumulation order and arithmetic as the cross-entropy part of
      // fixed_plan_loss_grad, so beta = 0 alignment matches this bitwise.
      const double inv_batch = 1.0 / static_cast<double>(xs.rows());
      for (std::size_t i = 0; i < xs.rows(); ++i) {
        const std::vector<double> qx =
            result.model.probabilities(&xs.data()[i * d]);
        for (int k = 0; k < K; ++k) {
          const double g = (qx[k] - p(i, k)) * inv_batch;
          grad.bias[k] += g;
          for (std::size_t e = 0; e < d; ++e) grad.weights(k, e) += g * xs(i, e);
        }
      }
    }

    record.source_loss = mean_cross_entropy(result.model, xs, p);
    bool finite = std::isfinite(record.source_loss) &&
                  std::isfinite(record.transport_cost);
    for (std::size_t k = 0; k < grad.weights.size() && finite; ++k)
      finite = std::isfinite(grad.weights.data()[k]);
    for (double g : grad.bias)
      if (!std::isfinite(g)) finite = false;
    if (!finite)
      throw DivergenceError("non-finite loss or gradient at iteration " +
                            std::to_string(it));

    for (std::size_t k = 0; k < grad.weights.size(); ++k)
      result.model.weights.data()[k] -= config.lr * grad.weights.data()[k];
    for (int k = 0; k < K; ++k) result.model.bias[k] -= config.lr * grad.bias[k];

    result.history.push_back(std::move(record));
  }
  return result;
}

}  // namespace

std::vector<double> LinearClassifier::probabilities(const double* x) const {
  const int K = num_classes();
  std::vector<double> s(K, 0.0);
  for (int k = 0; k < K; ++k) {
    double acc = bias[k];
    for (std::size_t e = 0; e < weights.cols(); ++e) acc += weights(k, e) * x[e];
    s[k] = acc;
  }
  const double hi = *std::max_element(s.begin(), s.end());
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    s[k] = std::exp(s[k] - hi);
    total += s[k];
  }
  for (int k = 0; k < K; ++k) s[k] /= total;
  return s;
}

DenseMatrix LinearClassifier::probabilities(const DenseMatrix& X) const {
  DenseMatrix out(X.rows(), num_classes(), 0.0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const std::vector<double> q = probabilities(&X.data()[i * X.cols()]);
    for (int k = 0; k < num_classes(); ++k) out(i, k) = q[k];
  }
  return out;
}

int LinearClassifier::predict(const double* x) const {
  const std::vector<double> q = probabilities(x);
  return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

std::pair<LabeledDataset, LabeledDataset> generate_synthetic_shift(
    const ShiftConfig& config) {
  if (config.K < 1) throw ValidationError("K must be at least 1");
  if (config.d < 1) throw ValidationError("d must be at least 1");
  if (config.per_class < 1) throw ValidationError("per_class must be at least 1");
  if (!(config.outlier_fraction >= 0.0 && config.outlier_fraction <= 1.0))
    throw ValidationError("outlier_fraction must lie in [0, 1]");
  std::vector<double> shift(config.d, 0.0);
  if (!config.shift_vector.empty()) {
    if (config.shift_vector.size() != static_cast<std::size_t>(config.d))
      throw ValidationError("shift_vector must have d entries");
    shift = config.shift_vector;
  }
  std::vector<char> missing(config.K, 0);
  for (int k : config.missing_target_classes) {
    if (k < 0 || k >= config.K)
      throw ValidationError("missing_target_classes entry out of range");
    missing[k] = 1;
  }
  if (std::count(missing.begin(), missing.end(), char(1)) == config.K)
    throw ValidationError("at least one target class must remain");

  const int K = config.K, d = config.d;
  DenseMatrix centers(K, d, 0.0);
  for (int k = 0; k < K; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / K;
    centers(k, 0) = kBlobOffsetX + kBlobRadius * std::cos(angle);
    if (d > 1) centers(k, 1) = kBlobOffsetY + kBlobRadius * std::sin(angle);
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> noise(0.0, kBlobStd);

  const auto draw_blobs = [&](LabeledDataset& out) {
    out.num_classes = K;
    out.features = DenseMatrix(std::size_t(K) * config.per_class, d, 0.0);
    out.labels.resize(out.features.rows());
    std::size_t r = 0;
    for (int k = 0; k < K; ++k)
      for (int t = 0; t < config.per_class; ++t, ++r) {
        for (int e = 0; e < d; ++e) out.features(r, e) = centers(k, e) + noise(rng);
        out.labels[r] = k;
      }
  };

  LabeledDataset source, raw_target;
  draw_blobs(source);
  draw_blobs(raw_target);

  LabeledDataset target;
  target.num_classes = K;
  std::vector<std::vector<double>> kept_rows;
  for (std::size_t r = 0; r < raw_target.size(); ++r) {
    if (missing[raw_target.labels[r]]) continue;
    std::vector<double> row(d);
    for (int e = 0; e < d; ++e) row[e] = raw_target.features(r, e);
    if (d > 1) rotate_xy(row.data(), config.rotation_angle);
    for (int e = 0; e < d; ++e) row[e] += shift[e];
    kept_rows.push_back(std::move(row));
    target.labels.push_back(raw_target.labels[r]);
  }
  target.features = DenseMatrix::from_rows(kept_rows);

  const std::size_t n_outliers = static_cast<std::size_t>(
      std::llround(config.outlier_fraction * static_cast<double>(target.size())));
  if (n_outliers > 0) {
    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < target.size(); ++r)
      for (int e = 0; e < d; ++e) {
        lo[e] = std::min(lo[e], target.features(r, e));
        hi[e] = std::max(hi[e], target.features(r, e));
      }

    DenseMatrix moved_centers(K, d, 0.0);
    for (int k = 0; k < K; ++k) {
      std::vector<double> row(d);
      for (int e = 0; e < d; ++e) row[e] = centers(k, e);
      if (d > 1) rotate_xy(row.data(), config.rotation_angle);
      for (int e = 0; e < d; ++e) moved_centers(k, e) = row[e] + shift[e];
    }

    const std::vector<std::size_t> chosen =
        sample_without_replacement(target.size(), n_outliers, rng);
    for (std::size_t r : chosen) {
      for (int e = 0; e < d; ++e) {
        std::uniform_real_distribution<double> box(lo[e], hi[e]);
        target.features(r, e) = box(rng);
      }
      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int k = 0; k < K; ++k) {
        if (missing[k]) continue;
        double dist = 0.0;
        for (int e = 0; e < d; ++e) {
          const double diff = target.features(r, e) - moved_centers(k, e);
          dist += diff * diff;
        }
        if (dist < best_dist) {
          best_dist = dist;
          best = k;
        }
      }
      target.labels[r] = best;
    }
  }
  return {std::move(source), std::move(target)};
}

std::vector<std::size_t> stratified_batch(const std::vector<int>& labels,
                                          int num_classes, int per_class,
                                          std::mt19937_64& rng) {
  if (num_classes < 1) throw ValidationError("num_classes must be at least 1");
  if (per_class < 1) throw ValidationError("per_class must be at least 1");
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] < 0 || labels[r] >= num_classes)
      throw ValidationError("label " + std::to_string(labels[r]) + " out of range");
    by_class[labels[r]].push_back(r);
  }

  std::vector<std::size_t> batch;
  batch.reserve(std::size_t(num_classes) * per_class);
  for (int k = 0; k < num_classes; ++k) {
    auto& pool = by_class[k];
    if (pool.size() < static_cast<std::size_t>(per_class))
      throw SamplingError("class " + std::to_string(k) + " has " +
                          std::to_string(pool.size()) + " samples, need " +
                          std::to_string(per_class));
    for (int t = 0; t < per_class; ++t) {
      std::uniform_int_distribution<std::size_t> pick(t, pool.size() - 1);
      std::swap(pool[t], pool[pick(rng)]);
      batch.push_back(pool[t]);
    }
  }
  std::shuffle(batch.begin(), batch.end(), rng);
  return batch;
}

CostMatrix build_alignment_cost(const DenseMatrix& xs, const DenseMatrix& zs,
                                const DenseMatrix& p, const DenseMatrix& q,
                                double alpha, double beta) {
  if (xs.cols() != zs.cols())
    throw ShapeError("feature dimensions differ: " + std::to_string(xs.cols()) +
                     " vs " + std::to_string(zs.cols()));
  if (p.rows() != xs.rows() || q.rows() != zs.rows() || p.cols() != q.cols())
    throw ShapeError("label matrices do not match the batches");
  for (std::size_t j = 0; j < q.rows(); ++j) {
    double total = 0.0;
    for (std::size_t k = 0; k < q.cols(); ++k) total += q(j, k);
    if (std::abs(total - 1.0) > 1e-6)
      throw ValidationError("probability row " + std::to_string(j) +
                            " sums to " + std::to_string(total));
  }

  DenseMatrix cost(xs.rows(), zs.rows(), 0.0);
  for (std::size_t i = 0; i < xs.rows(); ++i)
    for (std::size_t j = 0; j < zs.rows(); ++j) {
      double dist = 0.0;
      for (std::size_t e = 0; e < xs.cols(); ++e) {
        const double diff = xs(i, e) - zs(j, e);
        dist += diff * diff;
      }
      double match = 0.0;
      for (std::size_t k = 0; k < p.cols(); ++k) match += p(i, k) * q(j, k);
      cost(i, j) = alpha * dist - beta * match;
    }
  return CostMatrix(std::move(cost));
}

double fixed_plan_loss(const LinearClassifier& model, const DenseMatrix& xs,
                       const DenseMatrix& p, const DenseMatrix& zs,
                       const TransportPlan& plan, double alpha, double beta) {
  if (plan.rows() != xs.rows() || plan.cols() != zs.rows())
    throw ShapeError("plan shape does not match the batches");
  const DenseMatrix q = model.probabilities(zs);
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.rows(); ++i)
    for (std::size_t j = 0; j < zs.rows(); ++j) {
      if (plan(i, j) == 0.0) continue;
      double dist = 0.0;
      for (std::size_t e = 0; e < xs.cols(); ++e) {
        const double diff = xs(i, e) - zs(j, e);
        dist += diff * diff;
      }
      double match = 0.0;
      for (std::size_t k = 0; k < p.cols(); ++k) match += p(i, k) * q(j, k);
      loss += plan(i, j) * (alpha * dist - beta * match);
    }
  return loss + mean_cross_entropy(model, xs, p);
}

ParameterGradient fixed_plan_loss_grad(const LinearClassifier& model,
                                       const DenseMatrix& xs, const DenseMatrix& p,
                                       const DenseMatrix& zs, const TransportPlan& plan,
                                       double alpha, double beta) {
  (void)alpha;  // the feature term is constant in the parameters
  if (plan.rows() != xs.rows() || plan.cols() != zs.rows())
    throw ShapeError("plan shape does not match the batches");
  const std::size_t d = xs.cols();
  const std::size_t K = p.cols();
  ParameterGradient grad{DenseMatrix(K, d, 0.0), std::vector<double>(K, 0.0)};

  const double inv_batch = 1.0 / static_cast<double>(xs.rows());
  for (std::size_t i = 0; i < xs.rows(); ++i) {
    const std::vector<double> qx = model.probabilities(&xs.data()[i * d]);
    for (std::size_t k = 0; k < K; ++k) {
      const double g = (qx[k] - p(i, k)) * inv_batch;
      grad.bias[k] += g;
      for (std::size_t e = 0; e < d; ++e) grad.weights(k, e) += g * xs(i, e);
    }
  }

  // d<a, q(z)>/ds_k = q_k (a_k - <a, q>) through the softmax scores.
  std::vector<double> a(K);
  for (std::size_t j = 0; j < zs.rows(); ++j) {
    std::fill(a.begin(), a.end(), 0.0);
    for (std::size_t i = 0; i < xs.rows(); ++i) {
      const double g = plan(i, j);
      if (g == 0.0) continue;
      for (std::size_t k = 0; k < K; ++k) a[k] += g * p(i, k);
    }
    const std::vector<double> qz = model.probabilities(&zs.data()[j * d]);
    double inner = 0.0;
    for (std::size_t k = 0; k < K; ++k) inner += a[k] * qz[k];
    for (std::size_t k = 0; k < K; ++k) {
      const double g = -beta * qz[k] * (a[k] - inner);
      grad.bias[k] += g;
      for (std::size_t e = 0; e < d; ++e) grad.weights(k, e) += g * zs(j, e);
    }
  }
  return grad;
}

TrainResult train_aot_classifier(const LabeledDataset& source,
                                 const LabeledDataset& target,
                                 const TrainConfig& config) {
  return run_training(source, target, config, true);
}

TrainResult train_source_only(const LabeledDataset& source,
                              const LabeledDataset& target,
                              const TrainConfig& config) {
  return run_training(source, target, config, false);
}

LabelwiseReport labelwise_aggregate(const TransportPlan& plan,
                                    const std::vector<int>& source_labels,
                                    const std::vector<int>& target_labels,
                                    int num_classes) {
  if (source_labels.size() != plan.rows() || target_labels.size() != plan.cols())
    throw ShapeError("label counts do not match the plan shape");
  for (int l : source_labels)
    if (l < 0 || l >= num_classes)
      throw ValidationError("source label " + std::to_string(l) + " out of range");
  for (int l : target_labels)
    if (l < 0 || l >= num_classes)
      throw ValidationError("target label " + std::to_string(l) + " out of range");

  LabelwiseReport report;
  report.matrix = DenseMatrix(num_classes, num_classes, 0.0);
  for (std::size_t i = 0; i < plan.rows(); ++i)
    for (std::size_t j = 0; j < plan.cols(); ++j)
      report.matrix(source_labels[i], target_labels[j]) += plan(i, j);

  report.row_marginals.assign(num_classes, 0.0);
  report.col_marginals.assign(num_classes, 0.0);
  for (int a = 0; a < num_classes; ++a)
    for (int b = 0; b < num_classes; ++b) {
      report.row_marginals[a] += report.matrix(a, b);
      report.col_marginals[b] += report.matrix(a, b);
    }
  for (int k = 0; k < num_classes; ++k) {
    report.row_mean += report.row_marginals[k] / num_classes;
    report.col_mean += report.col_marginals[k] / num_classes;
  }
  return report;
}

double evaluate_accuracy(const LinearClassifier& model, const LabeledDataset& dataset) {
  if (!dataset.has_labels()) throw ValidationError("dataset has no labels");
  if (dataset.features.cols() != static_cast<std::size_t>(model.dim()))
    throw ShapeError("feature dimension does not match the model");
  std::size_t correct = 0;
  for (std::size_t r = 0; r < dataset.size(); ++r)
    if (model.predict(&dataset.features.data()[r * dataset.features.cols()]) ==
        dataset.labels[r])
      ++correct;
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

}  // namespace aot
