#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "subspace/dataset.hpp"
#include "subspace/matrix.hpp"
#include "subspace/optim.hpp"
#include "subspace/projection.hpp"

namespace subspace {

/// Linear head: logits = W h + b with W of shape C x k.
struct LinearClassifier {
  Matrix weights;
  Vector bias;

  static LinearClassifier zeros(std::size_t num_classes, std::size_t dim);

  std::size_t num_classes() const noexcept { return weights.rows(); }
  std::size_t dim() const noexcept { return weights.cols(); }

  Vector logits(std::span<const double> features) const;

  friend bool operator==(const LinearClassifier&, const LinearClassifier&) = default;
};

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
  std::size_t num_samples = 0;
  std::size_t num_correct = 0;
  std::vector<std::uint32_t> predictions;
};

struct SoftmaxCe {
  double loss;
  Vector grad;  // softmax(logits) - onehot(label)
};

/// Cross-entropy of softmax(logits) against `label`, max-subtracted.
SoftmaxCe softmax_ce(std::span<const double> logits, std::uint32_t label);

/// Index of the largest logit; the lowest index wins ties.
std::uint32_t argmax(std::span<const double> logits);

/// Mean batch loss and its gradients w.r.t. the head parameters.
struct HeadGradients {
  double loss = 0.0;
  Matrix weights;
  Vector bias;
};

HeadGradients head_loss_and_gradients(const LinearClassifier& clf, const Matrix& features,
                                      std::span<const std::uint32_t> labels);

/// Same loss with the features produced by a trainable map: logits = W (M x) + b.
struct LearnedGradients {
  HeadGradients head;
  Matrix map;  // k x d
};

LearnedGradients learned_loss_and_gradients(const Matrix& map, const LinearClassifier& clf,
                                            const Matrix& inputs,
                                            std::span<const std::uint32_t> labels);

/// Mini-batch training of a zero-initialized linear head. Deterministic for a
/// given (dataset, config).
LinearClassifier train_probe(const LabeledDataset& train, const TrainConfig& config);

/// Argmax accuracy (lowest index on ties) and mean cross-entropy.
EvalResult evaluate(const LinearClassifier& clf, const LabeledDataset& data);

struct LearnedProjectionOptions {
  /// Cap on how many optimizer steps may update the map. The head keeps
  /// training after the cap; 0 freezes the map at its initialization.
  std::optional<std::size_t> max_map_steps;
};

struct LearnedProjection {
  ProjectionMatrix projection;
  LinearClassifier classifier;
};

/// Trains the map and the head jointly under the probe loss. `init` must be a
/// JL map; the result keeps its seed and is tagged Learned. Before the first
/// step the pipeline's logits equal those of a frozen-JL probe exactly.
LearnedProjection train_learned_projection(const LabeledDataset& train,
                                           const ProjectionMatrix& init,
                                           const TrainConfig& config,
                                           const LearnedProjectionOptions& options = {});

/// True iff the projected probe's mean loss is within epsilon of the full one.
bool check_subspace_validity(const EvalResult& full, const EvalResult& projected, double epsilon);

}  // namespace subspace
