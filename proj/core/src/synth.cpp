#include "subspace/synth.hpp"

#include <cmath>
#include <string>

#include "subspace/error.hpp"
#include "subspace/rng.hpp"

namespace subspace {

void CollapseSpec::validate() const {
  if (num_classes < 2) throw InputError("collapse spec needs at least 2 classes");
  if (ambient_dim == 0) throw InputError("collapse spec needs ambient_dim >= 1");
  if (num_classes > ambient_dim + 1) {
    throw GeometryError("a simplex of " + std::to_string(num_classes) +
                        " points does not fit in dimension " + std::to_string(ambient_dim));
  }
  if (samples_per_class == 0) throw InputError("samples_per_class must be at least 1");
  if (!(within_class_sigma >= 0.0) || !std::isfinite(within_class_sigma)) {
    throw InputError("within_class_sigma must be non-negative");
  }
  if (!(mean_radius > 0.0) || !std::isfinite(mean_radius)) {
    throw InputError("mean_radius must be positive");
  }
}

Matrix simplex_etf_means(std::size_t num_classes, std::size_t dim, double radius,
                         std::uint64_t seed) {
  if (num_classes < 2 || num_classes > dim + 1) {
    throw GeometryError("simplex ETF needs 2 <= C <= d + 1, got C=" +
                        std::to_string(num_classes) + " d=" + std::to_string(dim));
  }
  const std::size_t c = num_classes;
  const std::size_t m = c - 1;
  // Vertex i is e_i - (1/C) 1, scaled to `radius`. Its coordinates in the
  // Helmert basis of the sum-zero hyperplane give a C x (C-1) matrix.
  const double scale = radius / std::sqrt(static_cast<double>(m) / static_cast<double>(c));
  Matrix coords(c, m);
  for (std::size_t j = 1; j <= m; ++j) {
    const double norm = std::sqrt(static_cast<double>(j * (j + 1)));
    for (std::size_t i = 0; i < c; ++i) {
      double basis = 0.0;
      if (i < j) basis = 1.0 / norm;
      else if (i == j) basis = -static_cast<double>(j) / norm;
      // <e_i - 1/C, h_j> = h_j[i] since h_j sums to zero.
      coords(i, j - 1) = scale * basis;
    }
  }
  SeededRng rng(seed);
  return matmul(coords, random_orthonormal_rows(rng, m, dim));
}

namespace {

LabeledDataset draw_split(const CollapseSpec& spec, const Matrix& means, SeededRng& rng,
                          Split split) {
  const std::size_t n = spec.num_classes * spec.samples_per_class;
  Matrix features(n, spec.ambient_dim);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto label = static_cast<std::uint32_t>(i % spec.num_classes);
    labels[i] = label;
    auto row = features.row(i);
    const auto mu = means.row(label);
    for (std::size_t j = 0; j < spec.ambient_dim; ++j) {
      row[j] = mu[j] + spec.within_class_sigma * rng.normal();
    }
  }
  return LabeledDataset(std::move(features), std::move(labels), spec.num_classes, split);
}

}  // namespace

CollapseData generate_collapse_dataset(const CollapseSpec& spec) {
  spec.validate();
  Matrix means =
      simplex_etf_means(spec.num_classes, spec.ambient_dim, spec.mean_radius, spec.seed);
  SeededRng train_rng(mix64(spec.seed));
  SeededRng test_rng(mix64(spec.seed + 1));
  LabeledDataset train = draw_split(spec, means, train_rng, Split::kTrain);
  LabeledDataset test = draw_split(spec, means, test_rng, Split::kTest);
  return {std::move(train), std::move(test), std::move(means)};
}

EvalResult nearest_mean_oracle(const Matrix& means, const LabeledDataset& data) {
  if (means.cols() != data.dim()) {
    throw ShapeError("means " + means.shape_string() + " do not match " +
                     std::to_string(data.dim()) + "-dim data");
  }
  EvalResult out;
  out.num_samples = data.size();
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint32_t best = 0;
    double best_dist = squared_distance(data.features().row(i), means.row(0));
    for (std::uint32_t c = 1; c < means.rows(); ++c) {
      const double dist = squared_distance(data.features().row(i), means.row(c));
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    out.predictions.push_back(best);
    if (best == data.labels()[i]) ++out.num_correct;
  }
  out.accuracy = static_cast<double>(out.num_correct) / static_cast<double>(out.num_samples);
  return out;
}

}  // namespace subspace
