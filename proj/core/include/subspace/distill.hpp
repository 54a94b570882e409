#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "subspace/matrix.hpp"
#include "subspace/optim.hpp"
#include "subspace/projection.hpp"

namespace subspace {

/// One-hidden-layer ReLU regressor: out = W2 relu(W1 x + b1) + b2.
struct StudentNet {
  Matrix layer1_weights;  // hidden x in
  Vector layer1_bias;
  Matrix layer2_weights;  // k x hidden
  Vector layer2_bias;

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  static StudentNet init(std::size_t input_dim, std::size_t hidden, std::size_t output_dim,
                         std::uint64_t seed);

  std::size_t input_dim() const noexcept { return layer1_weights.cols(); }
  std::size_t hidden_dim() const noexcept { return layer1_weights.rows(); }
  std::size_t output_dim() const noexcept { return layer2_weights.rows(); }

  /// Row-wise forward pass: N x in -> N x k.
  Matrix forward(const Matrix& inputs) const;

  friend bool operator==(const StudentNet&, const StudentNet&) = default;
};

struct SubspaceLoss {
  double loss;
  Vector grad_student;  // 2 (h_student - P h_teacher)
};

/// Squared distance between the student output and the projected teacher feature.
SubspaceLoss subspace_loss(std::span<const double> h_student, std::span<const double> h_teacher,
                           const ProjectionMatrix& p);

struct StudentGradients {
  double loss;  // mean over rows of ||out - target||^2
  Matrix layer1_weights;
  Vector layer1_bias;
  Matrix layer2_weights;
  Vector layer2_bias;
};

/// Batch-mean subspace loss against already-projected targets (N x k).
StudentGradients student_loss_and_gradients(const StudentNet& net, const Matrix& inputs,
                                            const Matrix& targets);

/// Mean subspace loss of the student over the whole set.
double mean_subspace_loss(const StudentNet& net, const Matrix& inputs,
                          const Matrix& teacher_features, const ProjectionMatrix& p);

/// Regresses P(teacher) from `inputs` with mini-batch training. The teacher
/// targets are projected once; `p` never changes. Deterministic given
/// (config.shuffle_seed, init_seed).
StudentNet train_student(const Matrix& inputs, const Matrix& teacher_features,
                         const ProjectionMatrix& p, const TrainConfig& config, std::size_t hidden,
                         std::uint64_t init_seed);

}  // namespace subspace
