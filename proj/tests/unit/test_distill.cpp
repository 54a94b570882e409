#include <gtest/gtest.h>

#include "oracles.hpp"
#include "subspace/distill.hpp"
#include "subspace/error.hpp"

using namespace subspace;

namespace {

Vector gaussian_vector(SeededRng& rng, std::size_t n) {
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

}  // namespace

TEST(SubspaceLoss, ZeroAtProjectedTeacher) {
  SeededRng rng(1);
  const ProjectionMatrix p = sample_jl(2, 20, 5);
  const Vector teacher = gaussian_vector(rng, 20);
  const Matrix target = project(p, Matrix::row_vector(teacher));
  const SubspaceLoss l = subspace_loss(target.row(0), teacher, p);
  EXPECT_EQ(l.loss, 0.0);
  for (double g : l.grad_student) EXPECT_EQ(g, 0.0);
}

TEST(SubspaceLoss, UnitOffset) {
  SeededRng rng(3);
  const ProjectionMatrix p = sample_jl(4, 20, 5);
  const Vector teacher = gaussian_vector(rng, 20);
  Matrix student = project(p, Matrix::row_vector(teacher));
  student(0, 0) += 1.0;
  const SubspaceLoss l = subspace_loss(student.row(0), teacher, p);
  EXPECT_NEAR(l.loss, 1.0, 1e-12);
  EXPECT_NEAR(l.grad_student[0], 2.0, 1e-12);
  for (std::size_t i = 1; i < 5; ++i) EXPECT_NEAR(l.grad_student[i], 0.0, 1e-12);
}

TEST(SubspaceLoss, GradientMatchesFiniteDifferences) {
  SeededRng rng(5);
  const ProjectionMatrix p = sample_jl(6, 32, 8);
  const Vector teacher = gaussian_vector(rng, 32);
  const Vector student = gaussian_vector(rng, 8);
  const SubspaceLoss l = subspace_loss(student, teacher, p);
  for (std::size_t i = 0; i < 8; ++i) {
    const double fd = oracle::central_difference(
        [&](const std::vector<double>& s) { return subspace_loss(s, teacher, p).loss; }, student,
        i, 1e-5);
    EXPECT_LT(oracle::relative_error(l.grad_student[i], fd), 1e-6);
  }
}

TEST(SubspaceLoss, NonNegativeProperty) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SeededRng rng(seed);
    const ProjectionMatrix p = sample_jl(rng, 12, 4);
    EXPECT_GE(subspace_loss(gaussian_vector(rng, 4), gaussian_vector(rng, 12), p).loss, 0.0);
  }
}

TEST(SubspaceLoss, ShapeMismatch) {
  const ProjectionMatrix p = sample_jl(1, 10, 3);
  EXPECT_THROW(subspace_loss(Vector(4), Vector(10), p), ShapeError);
  EXPECT_THROW(subspace_loss(Vector(3), Vector(9), p), ShapeError);
}

TEST(StudentGradients, EveryBlockMatchesFiniteDifferences) {
  SeededRng rng(7);
  const Matrix inputs = gaussian_matrix(rng, 5, 4);
  const Matrix targets = gaussian_matrix(rng, 5, 3);
  const StudentNet net = StudentNet::init(4, 6, 3, 8);
  const StudentGradients g = student_loss_and_gradients(net, inputs, targets);

  // Flatten all four blocks so one closure covers every parameter.
  std::vector<double> flat;
  auto append = [&flat](std::span<const double> v) { flat.insert(flat.end(), v.begin(), v.end()); };
  append(net.layer1_weights.data());
  append(net.layer1_bias);
  append(net.layer2_weights.data());
  append(net.layer2_bias);
  std::vector<double> analytic;
  auto append_g = [&analytic](std::span<const double> v) {
    analytic.insert(analytic.end(), v.begin(), v.end());
  };
  append_g(g.layer1_weights.data());
  append_g(g.layer1_bias);
  append_g(g.layer2_weights.data());
  append_g(g.layer2_bias);

  auto unflatten = [](const std::vector<double>& p) {
    auto at = p.begin();
    auto take = [&at](std::size_t n) {
      std::vector<double> v(at, at + static_cast<std::ptrdiff_t>(n));
      at += static_cast<std::ptrdiff_t>(n);
      return v;
    };
    StudentNet n{Matrix(6, 4, take(24)), take(6), Matrix(3, 6, take(18)), take(3)};
    return n;
  };
  auto loss = [&](const std::vector<double>& p) {
    return student_loss_and_gradients(unflatten(p), inputs, targets).loss;
  };
  ASSERT_EQ(flat.size(), analytic.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    EXPECT_LT(oracle::relative_error(analytic[i], oracle::central_difference(loss, flat, i, 1e-6),
                                     1e-6),
              1e-4)
        << "parameter " << i;
  }
}

// Loss of the all-zero student: the scale the fitted loss is judged against.
double target_energy(const Matrix& teacher, const ProjectionMatrix& p) {
  const Matrix z = project(p, teacher);
  double total = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) total += squared_norm(z.row(i));
  return total / static_cast<double>(z.rows());
}

TEST(TrainStudent, FitsALinearMapThroughIdentityProjection) {
  // Teacher features are already k-dim: targets = A x with a fixed random A.
  SeededRng rng(9);
  const Matrix inputs = gaussian_matrix(rng, 256, 6);
  const Matrix a = gaussian_matrix(rng, 4, 6);
  const Matrix teacher = matmul_transposed(inputs, a);
  const ProjectionMatrix identity = ProjectionMatrix::identity(4);
  TrainConfig cfg;
  cfg.optimizer = OptimizerKind::kAdamW;
  cfg.learning_rate = 3e-3;
  cfg.weight_decay = 0.0;
  cfg.epochs = 400;
  cfg.batch_size = 32;
  const StudentNet net = train_student(inputs, teacher, identity, cfg, 64, 10);
  EXPECT_LT(mean_subspace_loss(net, inputs, teacher, identity),
            1e-3 * target_energy(teacher, identity));
}

TEST(TrainStudent, ConvergesForOtherProjectionSeeds) {
  SeededRng rng(11);
  const Matrix inputs = gaussian_matrix(rng, 256, 6);
  const Matrix a = gaussian_matrix(rng, 24, 6);
  const Matrix teacher = matmul_transposed(inputs, a);
  TrainConfig cfg;
  cfg.learning_rate = 3e-3;
  cfg.weight_decay = 0.0;
  cfg.epochs = 300;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ProjectionMatrix p = sample_jl(seed, 24, 4);
    const StudentNet net = train_student(inputs, teacher, p, cfg, 64, 12);
    EXPECT_LT(mean_subspace_loss(net, inputs, teacher, p), 1e-2 * target_energy(teacher, p))
        << "projection seed " << seed;
  }
}

TEST(TrainStudent, ZeroEpochsReturnsInitialization) {
  SeededRng rng(13);
  const Matrix inputs = gaussian_matrix(rng, 10, 3);
  const Matrix teacher = gaussian_matrix(rng, 10, 8);
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_EQ(train_student(inputs, teacher, sample_jl(1, 8, 2), cfg, 5, 77),
            StudentNet::init(3, 5, 2, 77));
}

TEST(TrainStudent, Deterministic) {
  SeededRng rng(14);
  const Matrix inputs = gaussian_matrix(rng, 40, 3);
  const Matrix teacher = gaussian_matrix(rng, 40, 8);
  TrainConfig cfg;
  cfg.epochs = 5;
  const ProjectionMatrix p = sample_jl(1, 8, 2);
  EXPECT_EQ(train_student(inputs, teacher, p, cfg, 5, 3), train_student(inputs, teacher, p, cfg, 5, 3));
}

TEST(TrainStudent, RowCountMismatch) {
  EXPECT_THROW(train_student(Matrix(3, 2), Matrix(4, 8), sample_jl(1, 8, 2), TrainConfig{}, 4, 1),
               ShapeError);
}
