#ifndef AOT_ALIGNMENT_HPP
#define AOT_ALIGNMENT_HPP

#include <random>
#include <utility>
#include <vector>

#include "aot/dense.hpp"
#include "aot/measures.hpp"

namespace aot {

/// Feature rows with optional class labels (empty = unlabeled).
struct LabeledDataset {
  DenseMatrix features;    ///< n x d
  std::vector<int> labels; ///< length n when present, values in [0, K)
  int num_classes = 0;

  std::size_t size() const { return features.rows(); }
  bool has_labels() const { return !labels.empty(); }
};

/// Synthetic covariate-shift scenario: Gaussian class blobs, a rigid
/// rotation+shift applied to the target copy, optional uniform outliers
/// and dropped target classes.
struct ShiftConfig {
  int K = 3;
  int d = 2;
  int per_class = 100;
  std::vector<double> shift_vector;  ///< length d; empty = zero shift
  double rotation_angle = 0.0;       ///< radians, applied in dims (0, 1)
  double outlier_fraction = 0.0;
  std::vector<int> missing_target_classes;
  unsigned long long seed = 1;
};

/// Multinomial logistic regression on raw features.
struct LinearClassifier {
  DenseMatrix weights;       ///< K x d
  std::vector<double> bias;  ///< length K

  int num_classes() const { return static_cast<int>(bias.size()); }
  int dim() const { return static_cast<int>(weights.cols()); }

  /// Softmax class probabilities for one feature row.
  std::vector<double> probabilities(const double* x) const;
  /// Row-wise probabilities, n x K.
  DenseMatrix probabilities(const DenseMatrix& X) const;
  /// Argmax class, lowest index on ties.
  int predict(const double* x) const;
};

/// Training-loop hyperparameters.
struct TrainConfig {
  double alpha = 0.01;    ///< feature-cost weight
  double beta = 1.8;      ///< label-cost weight
  double epsilon = 0.1;   ///< entropic coefficient; 0 selects the exact solver
  int batch_source = 24;  ///< must be a multiple of K
  int batch_target = 24;
  double lr = 0.1;
  int iterations = 400;
  unsigned long long seed = 1;
};

/// Per-iteration training telemetry.
struct TrainRecord {
  double mass = 0.0;            ///< transported mass of the batch plan
  double transport_cost = 0.0;  ///< <plan, C>, linear part
  double source_loss = 0.0;     ///< mean cross-entropy on the source batch
  std::vector<double> source_class_mass;  ///< plan mass per source class
};

struct TrainResult {
  LinearClassifier model;
  std::vector<TrainRecord> history;
};

/// Gradient of the fixed-plan loss with respect to the classifier.
struct ParameterGradient {
  DenseMatrix weights;
  std::vector<double> bias;
};

/// Class-by-class aggregation of a sample-level plan.
struct LabelwiseReport {
  DenseMatrix matrix;                 ///< K x K, (a, b) = mass class a -> class b
  std::vector<double> row_marginals;  ///< per source class
  std::vector<double> col_marginals;  ///< per target class
  double row_mean = 0.0;
  double col_mean = 0.0;
};

/// Draws the source/target pair described by the config, deterministically
/// per seed. Target outliers are resampled uniformly over the bounding box
/// of the transformed points and keep a nearest-blob label for evaluation
/// only.
std::pair<LabeledDataset, LabeledDataset> generate_synthetic_shift(
    const ShiftConfig& config);

/// Samples per_class indices from every class without replacement, then
/// shuffles the combined batch. Classes short of per_class samples raise
/// SamplingError.
std::vector<std::size_t> stratified_batch(const std::vector<int>& labels,
                                          int num_classes, int per_class,
                                          std::mt19937_64& rng);

/// Pairwise cost alpha * |x_i - z_j|^2 - beta * <p_i, q_j>. Mixed sign by
/// construction when beta > 0.
CostMatrix build_alignment_cost(const DenseMatrix& xs, const DenseMatrix& zs,
                                const DenseMatrix& p, const DenseMatrix& q,
                                double alpha, double beta);

/// Training loss with the plan held fixed: transport term plus mean
/// source cross-entropy.
double fixed_plan_loss(const LinearClassifier& model, const DenseMatrix& xs,
                       const DenseMatrix& p, const DenseMatrix& zs,
                       const TransportPlan& plan, double alpha, double beta);

/// Analytic parameter gradient of fixed_plan_loss.
ParameterGradient fixed_plan_loss_grad(const LinearClassifier& model,
                                       const DenseMatrix& xs, const DenseMatrix& p,
                                       const DenseMatrix& zs, const TransportPlan& plan,
                                       double alpha, double beta);

/// Alternating training: per iteration draw a stratified source batch and
/// a uniform target batch, solve the transport plan on the current cost,
/// then take one gradient step with the plan fixed.
TrainResult train_aot_classifier(const LabeledDataset& source,
                                 const LabeledDataset& target,
                                 const TrainConfig& config);

/// Cross-entropy-only baseline consuming the same random draws as
/// train_aot_classifier, so runs with equal seeds see identical batches.
TrainResult train_source_only(const LabeledDataset& source,
                              const LabeledDataset& target,
                              const TrainConfig& config);

/// Aggregates plan mass by (source label, target label) pairs.
LabelwiseReport labelwise_aggregate(const TransportPlan& plan,
                                    const std::vector<int>& source_labels,
                                    const std::vector<int>& target_labels,
                                    int num_classes);

/// Fraction of argmax-correct predictions on a labeled dataset.
double evaluate_accuracy(const LinearClassifier& model, const LabeledDataset& dataset);

}  // namespace aot

#endif  // AOT_ALIGNMENT_HPP
