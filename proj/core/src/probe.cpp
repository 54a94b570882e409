#include "subspace/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "subspace/error.hpp"
#include "subspace/rng.hpp"

namespace subspace {

LinearClassifier LinearClassifier::zeros(std::size_t num_classes, std::size_t dim) {
  return {Matrix(num_classes, dim), Vector(num_classes, 0.0)};
}

Vector LinearClassifier::logits(std::span<const double> features) const {
  if (features.size() != dim()) {
    throw ShapeError("classifier expects " + std::to_string(dim()) + " features, got " +
                     std::to_string(features.size()));
  }
  Vector out(num_classes());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = dot(weights.row(c), features) + bias[c];
  return out;
}

SoftmaxCe softmax_ce(std::span<const double> logits, std::uint32_t label) {
  if (logits.empty()) throw InputError("softmax_ce needs at least one logit");
  if (label >= logits.size()) {
    throw InputError("label " + std::to_string(label) + " out of range for " +
                     std::to_string(logits.size()) + " classes");
  }
  for (double z : logits) {
    if (!std::isfinite(z)) throw NumericError("softmax_ce received a non-finite logit");
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  SoftmaxCe out{0.0, Vector(logits.size())};
  double total = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    out.grad[c] = std::exp(logits[c] - top);
    total += out.grad[c];
  }
  for (double& p : out.grad) p /= total;
  out.loss = std::log(total) - (logits[label] - top);
  out.grad[label] -= 1.0;
  return out;
}

std::uint32_t argmax(std::span<const double> logits) {
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < logits.size(); ++c) {
    if (logits[c] > logits[best]) best = c;
  }
  return best;
}

namespace {

void require_head_shape(const LinearClassifier& clf, const Matrix& features,
                        std::span<const std::uint32_t> labels) {
  if (features.cols() != clf.dim()) {
    throw ShapeError("features " + features.shape_string() + " do not match classifier " +
                     clf.weights.shape_string());
  }
  if (labels.size() != features.rows()) throw ShapeError("label count does not match rows");
}

// Mean loss plus head gradients; per-row logit gradients land in `dlogits`
// (B x C) when requested.
HeadGradients head_pass(const LinearClassifier& clf, const Matrix& features,
                        std::span<const std::uint32_t> labels, Matrix* dlogits) {
  require_head_shape(clf, features, labels);
  const std::size_t batch = features.rows();
  const double inv = 1.0 / static_cast<double>(batch);
  HeadGradients out{0.0, Matrix(clf.num_classes(), clf.dim()), Vector(clf.num_classes(), 0.0)};
  for (std::size_t i = 0; i < batch; ++i) {
    const auto z = features.row(i);
    const SoftmaxCe ce = softmax_ce(clf.logits(z), labels[i]);
    out.loss += ce.loss;
    for (std::size_t c = 0; c < ce.grad.size(); ++c) {
      const double g = ce.grad[c] * inv;
      out.bias[c] += g;
      auto w = out.weights.row(c);
      for (std::size_t j = 0; j < z.size(); ++j) w[j] += g * z[j];
      if (dlogits != nullptr) (*dlogits)(i, c) = g;
    }
  }
  out.loss *= inv;
  return out;
}

void require_finite_params(const LinearClassifier& clf, std::size_t step) {
  const bool ok = clf.weights.all_finite() &&
                  std::all_of(clf.bias.begin(), clf.bias.end(),
                              [](double v) { return std::isfinite(v); });
  if (!ok) {
    throw DivergenceError("probe parameters became non-finite at step " + std::to_string(step),
                          step);
  }
}

void require_finite_loss(double loss, std::size_t step) {
  if (!std::isfinite(loss)) {
    throw DivergenceError("non-finite training loss at step " + std::to_string(step), step);
  }
}

// Calls step(batch_indices, step_index) for every mini-batch of every epoch.
// The last partial batch is kept.
template <typename StepFn>
void for_each_batch(std::size_t num_rows, const TrainConfig& config, StepFn&& step) {
  SeededRng rng(config.shuffle_seed);
  std::vector<std::size_t> order(num_rows);
  std::size_t step_index = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    for (std::size_t start = 0; start < num_rows; start += config.batch_size) {
      const std::size_t end = std::min(num_rows, start + config.batch_size);
      step(std::span<const std::size_t>(order.data() + start, end - start), step_index++);
    }
  }
}

std::vector<std::uint32_t> gather_labels(std::span<const std::uint32_t> labels,
                                         std::span<const std::size_t> indices) {
  std::vector<std::uint32_t> out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) out[i] = labels[indices[i]];
  return out;
}

}  // namespace

HeadGradients head_loss_and_gradients(const LinearClassifier& clf, const Matrix& features,
                                      std::span<const std::uint32_t> labels) {
  return head_pass(clf, features, labels, nullptr);
}

LearnedGradients learned_loss_and_gradients(const Matrix& map, const LinearClassifier& clf,
                                            const Matrix& inputs,
                                            std::span<const std::uint32_t> labels) {
  if (inputs.cols() != map.cols()) {
    throw ShapeError("inputs " + inputs.shape_string() + " do not match map " +
                     map.shape_string());
  }
  const Matrix projected = matmul_transposed(inputs, map);
  Matrix dlogits(inputs.rows(), clf.num_classes());
  HeadGradients head = head_pass(clf, projected, labels, &dlogits);
  // dL/dM = (dlogits W)^T x, with the 1/B already folded into dlogits.
  const Matrix dprojected = matmul(dlogits, clf.weights);
  return {std::move(head), matmul(transpose(dprojected), inputs)};
}

LinearClassifier train_probe(const LabeledDataset& train, const TrainConfig& config) {
  config.validate();
  LinearClassifier clf = LinearClassifier::zeros(train.num_classes(), train.dim());
  Optimizer optimizer(config);
  const Matrix& x = train.features();
  for_each_batch(train.size(), config, [&](std::span<const std::size_t> idx, std::size_t step) {
    const Matrix batch = gather_rows(x, idx);
    const auto labels = gather_labels(train.labels(), idx);
    const HeadGradients g = head_loss_and_gradients(clf, batch, labels);
    require_finite_loss(g.loss, step);
    const ParamBlock blocks[] = {{clf.weights.mutable_data(), g.weights.data(), true},
                                 {clf.bias, g.bias, false}};
    optimizer.step(blocks);
    require_finite_params(clf, step);
  });
  return clf;
}

EvalResult evaluate(const LinearClassifier& clf, const LabeledDataset& data) {
  if (data.dim() != clf.dim()) {
    throw ShapeError("dataset with " + std::to_string(data.dim()) +
                     " features does not match classifier " + clf.weights.shape_string());
  }
  if (data.num_classes() != clf.num_classes()) {
    throw ShapeError("dataset has " + std::to_string(data.num_classes()) +
                     " classes, classifier has " + std::to_string(clf.num_classes()));
  }
  EvalResult out;
  out.num_samples = data.size();
  out.predictions.reserve(data.size());
  double total_loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vector z = clf.logits(data.features().row(i));
    const std::uint32_t pred = argmax(z);
    out.predictions.push_back(pred);
    if (pred == data.labels()[i]) ++out.num_correct;
    total_loss += softmax_ce(z, data.labels()[i]).loss;
  }
  out.accuracy = static_cast<double>(out.num_correct) / static_cast<double>(out.num_samples);
  out.mean_loss = total_loss / static_cast<double>(out.num_samples);
  return out;
}

LearnedProjection train_learned_projection(const LabeledDataset& train,
                                           const ProjectionMatrix& init,
                                           const TrainConfig& config,
                                           const LearnedProjectionOptions& options) {
  config.validate();
  if (init.method() != ProjectionMethod::kJL) {
    throw InputError("learned projection must start from a JL map, got " +
                     std::string(to_string(init.method())));
  }
  if (train.dim() != init.source_dim()) {
    throw ShapeError("dataset with " + std::to_string(train.dim()) +
                     " features does not match projection source dim " +
                     std::to_string(init.source_dim()));
  }
  Matrix map = init.map();
  LinearClassifier clf = LinearClassifier::zeros(train.num_classes(), init.target_dim());
  Optimizer optimizer(config);
  std::size_t map_steps = 0;
  const Matrix& x = train.features();

  for_each_batch(train.size(), config, [&](std::span<const std::size_t> idx, std::size_t step) {
    const Matrix batch = gather_rows(x, idx);
    const auto labels = gather_labels(train.labels(), idx);
    const bool update_map = !options.max_map_steps || map_steps < *options.max_map_steps;
    if (!update_map) {
      // Frozen map: the exact computation path of train_probe on projected rows.
      const HeadGradients g = head_loss_and_gradients(clf, matmul_transposed(batch, map), labels);
      require_finite_loss(g.loss, step);
      const ParamBlock blocks[] = {{clf.weights.mutable_data(), g.weights.data(), true},
                                   {clf.bias, g.bias, false}};
      optimizer.step(blocks);
    } else {
      const LearnedGradients g = learned_loss_and_gradients(map, clf, batch, labels);
      require_finite_loss(g.head.loss, step);
      const ParamBlock blocks[] = {{clf.weights.mutable_data(), g.head.weights.data(), true},
                                   {clf.bias, g.head.bias, false},
                                   {map.mutable_data(), g.map.data(), true}};
      optimizer.step(blocks);
      ++map_steps;
      if (!map.all_finite()) {
        throw DivergenceError("projection became non-finite at step " + std::to_string(step),
                              step);
      }
    }
    require_finite_params(clf, step);
  });

  return {ProjectionMatrix(std::move(map), ProjectionMethod::kLearned, init.seed(),
                           init.scale_applied()),
          std::move(clf)};
}

bool check_subspace_validity(const EvalResult& full, const EvalResult& projected, double epsilon) {
  return projected.mean_loss <= full.mean_loss + epsilon;
}

}  // namespace subspace
