#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace subspace {

enum class OptimizerKind { kSgdMomentum, kAdamW };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view name);

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::kAdamW;
  double learning_rate = 1e-3;
  double weight_decay = 0.0;
  double momentum = 0.9;  // SGD only
  std::size_t epochs = 3;
  std::size_t batch_size = 32;
  std::uint64_t shuffle_seed = 42;

  /// Throws InputError on lr <= 0, batch_size == 0 or momentum outside [0, 1).
  /// epochs == 0 is accepted and means "return the initialization".
  void validate() const;

  /// Linear-probe presets from the reference hyperparameter table.
  static TrainConfig resnet_sgd();
  static TrainConfig bert_adamw();
  static TrainConfig vit_adamw();
};

/// One parameter tensor seen by the optimizer as a flat span.
struct ParamBlock {
  std::span<double> params;
  std::span<const double> grads;
  bool decay = true;
};

/// SGD with momentum (L2 weight decay added to the gradient) or AdamW
/// (decoupled decay, betas 0.9/0.999, eps 1e-8). State is keyed by block
/// position, so pass blocks in the same order on every step.
class Optimizer {
 public:
  explicit Optimizer(const TrainConfig& config);

  void step(std::span<const ParamBlock> blocks);

  /// Updates only the listed blocks but advances the shared step counter;
  /// `active[i] == false` leaves block i and its state untouched.
  void step(std::span<const ParamBlock> blocks, std::span<const bool> active);

  std::size_t steps_taken() const noexcept { return steps_; }

 private:
  void update_block(std::size_t index, const ParamBlock& block);

  TrainConfig config_;
  std::size_t steps_ = 0;
  std::vector<std::vector<double>> first_moment_;
  std::vector<std::vector<double>> second_moment_;
};

}  // namespace subspace
