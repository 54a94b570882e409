#include "subspace/distill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "subspace/error.hpp"
#include "subspace/rng.hpp"

namespace subspace {

StudentNet StudentNet::init(std::size_t input_dim, std::size_t hidden, std::size_t output_dim,
                            std::uint64_t seed) {
  if (input_dim == 0 || hidden == 0 || output_dim == 0) {
    throw InvalidDimensionError("student dimensions must be positive");
  }
  SeededRng rng(seed);
  auto fill = [&rng](std::span<double> values, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : values) v = rng.uniform(-bound, bound);
  };
  StudentNet net{Matrix(hidden, input_dim), Vector(hidden), Matrix(output_dim, hidden),
                 Vector(output_dim)};
  fill(net.layer1_weights.mutable_data(), input_dim);
  fill(net.layer1_bias, input_dim);
  fill(net.layer2_weights.mutable_data(), hidden);
  fill(net.layer2_bias, hidden);
  return net;
}

namespace {

// Pre-activations of the hidden layer for every row.
Matrix hidden_pre(const StudentNet& net, const Matrix& inputs) {
  if (inputs.cols() != net.input_dim()) {
    throw ShapeError("student expects " + std::to_string(net.input_dim()) +
                     " input features, got " + inputs.shape_string());
  }
  Matrix pre = matmul_transposed(inputs, net.layer1_weights);
  for (std::size_t i = 0; i < pre.rows(); ++i) {
    auto r = pre.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += net.layer1_bias[j];
  }
  return pre;
}

Matrix relu(Matrix x) {
  for (double& v : x.mutable_data()) v = std::max(v, 0.0);
  return x;
}

Matrix output_layer(const StudentNet& net, const Matrix& hidden) {
  Matrix out = matmul_transposed(hidden, net.layer2_weights);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += net.layer2_bias[j];
  }
  require_finite(out, "student output");
  return out;
}

bool finite(const StudentNet& net) {
  auto ok = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return ok(net.layer1_weights.data()) && ok(net.layer1_bias) && ok(net.layer2_weights.data()) &&
         ok(net.layer2_bias);
}

}  // namespace

Matrix StudentNet::forward(const Matrix& inputs) const {
  return output_layer(*this, relu(hidden_pre(*this, inputs)));
}

SubspaceLoss subspace_loss(std::span<const double> h_student, std::span<const double> h_teacher,
                           const ProjectionMatrix& p) {
  if (h_teacher.size() != p.source_dim() || h_student.size() != p.target_dim()) {
    throw ShapeError("subspace loss expects student " + std::to_string(p.target_dim()) +
                     " / teacher " + std::to_string(p.source_dim()) + ", got " +
                     std::to_string(h_student.size()) + " / " + std::to_string(h_teacher.size()));
  }
  SubspaceLoss out{0.0, Vector(h_student.size())};
  for (std::size_t r = 0; r < h_student.size(); ++r) {
    const double diff = h_student[r] - dot(p.map().row(r), h_teacher);
    out.loss += diff * diff;
    out.grad_student[r] = 2.0 * diff;
  }
  return out;
}

StudentGradients student_loss_and_gradients(const StudentNet& net, const Matrix& inputs,
                                            const Matrix& targets) {
  if (targets.rows() != inputs.rows() || targets.cols() != net.output_dim()) {
    throw ShapeError("targets " + targets.shape_string() + " do not match student output for " +
                     inputs.shape_string() + " inputs");
  }
  const Matrix pre = hidden_pre(net, inputs);
  const Matrix hidden = relu(pre);
  const Matrix out = output_layer(net, hidden);

  const double inv = 1.0 / static_cast<double>(inputs.rows());
  Matrix dout(out.rows(), out.cols());
  double loss = 0.0;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      const double diff = out(i, j) - targets(i, j);
      loss += diff * diff;
      dout(i, j) = 2.0 * diff * inv;
    }
  }

  Matrix g_w2 = matmul(transpose(dout), hidden);
  Vector g_b2(out.cols(), 0.0);
  for (std::size_t i = 0; i < dout.rows(); ++i)
    for (std::size_t j = 0; j < dout.cols(); ++j) g_b2[j] += dout(i, j);

  Matrix dpre = matmul(dout, net.layer2_weights);
  for (std::size_t i = 0; i < dpre.size(); ++i) {
    if (pre.data()[i] <= 0.0) dpre.mutable_data()[i] = 0.0;
  }
  Matrix g_w1 = matmul(transpose(dpre), inputs);
  Vector g_b1(dpre.cols(), 0.0);
  for (std::size_t i = 0; i < dpre.rows(); ++i)
    for (std::size_t j = 0; j < dpre.cols(); ++j) g_b1[j] += dpre(i, j);

  StudentGradients g{loss * inv, std::move(g_w1), std::move(g_b1), std::move(g_w2),
                     std::move(g_b2)};
  return g;
}

double mean_subspace_loss(const StudentNet& net, const Matrix& inputs,
                          const Matrix& teacher_features, const ProjectionMatrix& p) {
  if (inputs.rows() != teacher_features.rows()) {
    throw ShapeError("inputs and teacher features have different row counts");
  }
  const Matrix out = net.forward(inputs);
  double total = 0.0;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    total += subspace_loss(out.row(i), teacher_features.row(i), p).loss;
  }
  return total / static_cast<double>(out.rows());
}

StudentNet train_student(const Matrix& inputs, const Matrix& teacher_features,
                         const ProjectionMatrix& p, const TrainConfig& config, std::size_t hidden,
                         std::uint64_t init_seed) {
  config.validate();
  if (inputs.rows() != teacher_features.rows()) {
    throw ShapeError("inputs have " + std::to_string(inputs.rows()) + " rows but teacher has " +
                     std::to_string(teacher_features.rows()));
  }
  const Matrix targets = project(p, teacher_features);
  StudentNet net = StudentNet::init(inputs.cols(), hidden, p.target_dim(), init_seed);
  Optimizer optimizer(config);

  SeededRng rng(config.shuffle_seed);
  std::vector<std::size_t> order(inputs.rows());
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const StudentGradients g =
          student_loss_and_gradients(net, gather_rows(inputs, idx), gather_rows(targets, idx));
      if (!std::isfinite(g.loss)) {
        throw DivergenceError("non-finite student loss at step " + std::to_string(step), step);
      }
      const ParamBlock blocks[] = {
          {net.layer1_weights.mutable_data(), g.layer1_weights.data(), true},
          {net.layer1_bias, g.layer1_bias, false},
          {net.layer2_weights.mutable_data(), g.layer2_weights.data(), true},
          {net.layer2_bias, g.layer2_bias, false}};
      optimizer.step(blocks);
      if (!finite(net)) {
        throw DivergenceError("student parameters became non-finite at step " +
                                  std::to_string(step),
                              step);
      }
      ++step;
    }
  }
  return net;
}

}  // namespace subspace
