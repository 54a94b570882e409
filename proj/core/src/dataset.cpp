#include "subspace/dataset.hpp"

#include <string>

#include "subspace/error.hpp"

namespace subspace {

std::string_view to_string(Split split) { return split == Split::kTrain ? "train" : "test"; }

LabeledDataset::LabeledDataset(Matrix features, std::vector<std::uint32_t> labels,
                               std::size_t num_classes, Split split)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      num_classes_(num_classes),
      split_(split) {
  if (num_classes_ < 2) {
    throw InputError("dataset needs at least 2 classes, got " + std::to_string(num_classes_));
  }
  if (labels_.size() != features_.rows()) {
    throw ShapeError("dataset has " + std::to_string(features_.rows()) + " feature rows but " +
                     std::to_string(labels_.size()) + " labels");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= num_classes_) {
      throw InputError("label " + std::to_string(labels_[i]) + " at row " + std::to_string(i) +
                       " is not below num_classes=" + std::to_string(num_classes_));
    }
  }
}

LabeledDataset LabeledDataset::with_features(Matrix features) const {
  return LabeledDataset(std::move(features), labels_, num_classes_, split_);
}

}  // namespace subspace
