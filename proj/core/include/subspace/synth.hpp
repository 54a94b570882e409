#pragma once

#include <cstddef>
#include <cstdint>

#include "subspace/dataset.hpp"
#include "subspace/matrix.hpp"
#include "subspace/probe.hpp"

namespace subspace {

/// Class means on a simplex ETF plus isotropic Gaussian noise.
struct CollapseSpec {
  std::size_t num_classes = 10;
  std::size_t ambient_dim = 256;
  std::size_t samples_per_class = 100;
  double within_class_sigma = 0.05;
  double mean_radius = 1.0;
  std::uint64_t seed = 42;

  /// Throws GeometryError when num_classes > ambient_dim + 1, InputError for
  /// other out-of-range fields.
  void validate() const;
};

/// C means with norm `radius` and pairwise inner product -radius^2/(C-1),
/// built in C-1 coordinates and then carried into R^d by a random orthonormal
/// frame drawn from `seed`.
Matrix simplex_etf_means(std::size_t num_classes, std::size_t dim, double radius,
                         std::uint64_t seed);

struct CollapseData {
  LabeledDataset train;
  LabeledDataset test;
  Matrix means;
};

/// Balanced samples, class of row i is i mod C. The train split and the means
/// come from `seed`, the test split from `seed + 1`.
CollapseData generate_collapse_dataset(const CollapseSpec& spec);

/// Assigns each row to the nearest mean (lowest index on ties). Loss is not
/// meaningful for this classifier and is reported as 0.
EvalResult nearest_mean_oracle(const Matrix& means, const LabeledDataset& data);

}  // namespace subspace
