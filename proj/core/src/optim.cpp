#include "subspace/optim.hpp"

#include <cmath>
#include <string>

#include "subspace/error.hpp"

namespace subspace {

namespace {
constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
}  // namespace

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kAdamW ? "adamw" : "sgd";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "adamw" || name == "AdamW") return OptimizerKind::kAdamW;
  if (name == "sgd" || name == "SGD" || name == "sgd-momentum") return OptimizerKind::kSgdMomentum;
  throw InputError("unknown optimizer '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InputError("learning_rate must be positive");
  }
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw InputError("weight_decay must be non-negative");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) throw InputError("momentum must be in [0, 1)");
  if (batch_size == 0) throw InputError("batch_size must be at least 1");
}

TrainConfig TrainConfig::resnet_sgd() {
  return {OptimizerKind::kSgdMomentum, 1e-2, 5e-4, 0.9, 5, 128, 42};
}

TrainConfig TrainConfig::bert_adamw() { return {OptimizerKind::kAdamW, 1e-3, 1e-2, 0.9, 3, 32, 42}; }

TrainConfig TrainConfig::vit_adamw() { return {OptimizerKind::kAdamW, 1e-3, 1e-4, 0.9, 3, 32, 42}; }

Optimizer::Optimizer(const TrainConfig& config) : config_(config) { config_.validate(); }

void Optimizer::step(std::span<const ParamBlock> blocks) {
  ++steps_;
  for (std::size_t i = 0; i < blocks.size(); ++i) update_block(i, blocks[i]);
}

void Optimizer::step(std::span<const ParamBlock> blocks, std::span<const bool> active) {
  ++steps_;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (active[i]) update_block(i, blocks[i]);
  }
}

void Optimizer::update_block(std::size_t index, const ParamBlock& block) {
  if (first_moment_.size() <= index) {
    first_moment_.resize(index + 1);
    second_moment_.resize(index + 1);
  }
  auto& m = first_moment_[index];
  auto& v = second_moment_[index];
  if (m.size() != block.params.size()) {
    m.assign(block.params.size(), 0.0);
    v.assign(block.params.size(), 0.0);
  }
  const double lr = config_.learning_rate;
  const double wd = block.decay ? config_.weight_decay : 0.0;

  if (config_.optimizer == OptimizerKind::kSgdMomentum) {
    for (std::size_t j = 0; j < block.params.size(); ++j) {
      const double g = block.grads[j] + wd * block.params[j];
      m[j] = config_.momentum * m[j] + g;
      block.params[j] -= lr * m[j];
    }
    return;
  }

  const auto t = static_cast<double>(steps_);
  const double correction1 = 1.0 - std::pow(kBeta1, t);
  const double correction2 = 1.0 - std::pow(kBeta2, t);
  for (std::size_t j = 0; j < block.params.size(); ++j) {
    const double g = block.grads[j];
    block.params[j] *= 1.0 - lr * wd;
    m[j] = kBeta1 * m[j] + (1.0 - kBeta1) * g;
    v[j] = kBeta2 * v[j] + (1.0 - kBeta2) * g * g;
    const double m_hat = m[j] / correction1;
    const double v_hat = v[j] / correction2;
    block.params[j] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEps);
  }
}

}  // namespace subspace
