#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "subspace/optim.hpp"
#include "subspace/projection.hpp"
#include "subspace/synth.hpp"

namespace subspace {

struct DataSource {
  enum class Kind { kSynthetic, kFiles };
  Kind kind = Kind::kSynthetic;
  CollapseSpec synthetic;
  std::filesystem::path train_path;
  std::filesystem::path test_path;
};

/// Everything a sweep or ablation run needs. See README for the TOML schema.
struct SweepConfig {
  DataSource data;
  std::vector<std::size_t> target_dims;
  std::vector<ProjectionMethod> methods = {ProjectionMethod::kJL};
  TrainConfig baseline_train = TrainConfig::bert_adamw();
  std::map<ProjectionMethod, TrainConfig> method_train;
  std::optional<std::size_t> learned_map_steps;
  double epsilon = 0.05;
  std::uint64_t master_seed = 42;

  const TrainConfig& train_for(ProjectionMethod method) const;

  /// Checks every k against the ambient dimension and the train configs.
  void validate(std::size_t ambient_dim) const;
};

/// Per-k JL seed: master XOR mix64(k). Adding a k never changes other rows.
std::uint64_t jl_seed_for(std::uint64_t master_seed, std::size_t k);

/// Parses the TOML schema. Relative data paths resolve against `base_dir`.
SweepConfig parse_sweep_config(std::string_view toml_text,
                               const std::filesystem::path& base_dir = {});
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Replaces the master seed and every seed that was defaulted from it.
void override_master_seed(SweepConfig& config, std::uint64_t seed);

}  // namespace subspace
