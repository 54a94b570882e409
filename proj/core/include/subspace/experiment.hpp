#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "subspace/config.hpp"
#include "subspace/dataset.hpp"
#include "subspace/projection.hpp"
#include "subspace/report.hpp"

namespace subspace {

struct SplitData {
  LabeledDataset train;
  LabeledDataset test;
};

/// Generates the synthetic collapse data or loads the train/test files.
SplitData load_sweep_data(const SweepConfig& config);

/// A projection fitted on the train split, plus the centering row for PCA.
struct FittedProjection {
  ProjectionMatrix projection;
  std::optional<Matrix> center;

  Matrix apply(const Matrix& x) const;
};

/// What a sweep fitted, in report row order. Lets callers inspect the maps.
struct SweepArtifacts {
  std::vector<FittedProjection> projections;
};

/// Full-dimension baseline probe, then one probe per (method, k) on features
/// projected by a map fitted on train rows only.
ExperimentReport run_sweep(const SweepConfig& config, const SplitData& data,
                           SweepArtifacts* artifacts = nullptr);
ExperimentReport run_sweep(const SweepConfig& config);

/// Like run_sweep but requires JL, PCA and Learned; the Learned map starts
/// from the exact JL map of the same k.
ExperimentReport run_ablation(const SweepConfig& config, const SplitData& data,
                              SweepArtifacts* artifacts = nullptr);
ExperimentReport run_ablation(const SweepConfig& config);

/// Projected coordinates plus label per line, no header, for external plotting.
void export_coords(const LabeledDataset& data, const FittedProjection& projection,
                   const std::filesystem::path& path);
std::string render_coords(const LabeledDataset& data, const FittedProjection& projection);

/// End-to-end student demo: a frozen random teacher maps raw collapse inputs
/// to d-dim features; a small student regresses their JL projection.
struct DistillDemoConfig {
  CollapseSpec inputs{10, 64, 100, 0.2, 1.0, 42};
  std::size_t teacher_dim = 256;
  std::size_t target_dim = 32;
  std::size_t hidden = 128;
  TrainConfig student_train{OptimizerKind::kAdamW, 3e-3, 0.0, 0.9, 60, 32, 42};
  TrainConfig probe_train{OptimizerKind::kAdamW, 1e-2, 1e-4, 0.9, 20, 32, 42};
  std::uint64_t seed = 42;
};

struct DistillDemoResult {
  std::size_t teacher_dim = 0;
  std::size_t target_dim = 0;
  double projected_teacher_accuracy = 0.0;  // probe on P(teacher), test split
  double student_accuracy = 0.0;            // probe on student outputs, test split
  double student_train_loss = 0.0;
  double student_test_loss = 0.0;
};

/// tanh(A x) with A ~ N(0, 1/in) drawn from `seed`: the frozen teacher.
Matrix random_teacher_features(const Matrix& inputs, std::size_t teacher_dim, std::uint64_t seed);

DistillDemoResult run_distill_demo(const DistillDemoConfig& config);
std::string render_distill_json(const DistillDemoResult& result);
std::string render_distill_markdown(const DistillDemoResult& result);

}  // namespace subspace
