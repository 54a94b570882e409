#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "subspace/matrix.hpp"

namespace subspace {

enum class Split { kTrain, kTest };

std::string_view to_string(Split split);

/// Embedding rows paired with integer class ids in [0, num_classes).
class LabeledDataset {
 public:
  LabeledDataset(Matrix features, std::vector<std::uint32_t> labels, std::size_t num_classes,
                 Split split);

  const Matrix& features() const noexcept { return features_; }
  std::span<const std::uint32_t> labels() const noexcept { return labels_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  Split split() const noexcept { return split_; }

  std::size_t size() const noexcept { return features_.rows(); }
  std::size_t dim() const noexcept { return features_.cols(); }

  /// Same labels and split, new feature matrix with the same row count.
  LabeledDataset with_features(Matrix features) const;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;

 private:
  Matrix features_;
  std::vector<std::uint32_t> labels_;
  std::size_t num_classes_;
  Split split_;
};

}  // namespace subspace
