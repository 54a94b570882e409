#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "subspace/dataset.hpp"
#include "subspace/error.hpp"
#include "subspace/matrix.hpp"
#include "subspace/rng.hpp"

using namespace subspace;

TEST(Matmul, IdentityLeavesOperandUnchanged) {
  const Matrix b = Matrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(matmul(Matrix::identity(2), b), b);
}

TEST(Matmul, ZeroColumn) {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(matmul(a, Matrix(2, 1)), Matrix(2, 1));
}

TEST(Matmul, HandComputedProduct) {
  // 1*5+2*7=19, 1*6+2*8=22, 3*5+4*7=43, 3*6+4*8=50
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  const Matrix b = Matrix::from_rows({{5, 6}, {7, 8}});
  EXPECT_EQ(matmul(a, b), Matrix::from_rows({{19, 22}, {43, 50}}));
}

TEST(Matmul, ShapeErrorNamesBothOperands) {
  try {
    matmul(Matrix(2, 3), Matrix(2, 3));
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("2x3 x 2x3"), std::string::npos) << e.what();
  }
}

TEST(Matmul, AssociativityOnRandomMatrices) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SeededRng rng(seed);
    const auto n = 1 + rng.uniform_index(6);
    const auto m = 1 + rng.uniform_index(6);
    const auto p = 1 + rng.uniform_index(6);
    const auto q = 1 + rng.uniform_index(6);
    const Matrix a = gaussian_matrix(rng, n, m);
    const Matrix b = gaussian_matrix(rng, m, p);
    const Matrix c = gaussian_matrix(rng, p, q);
    const Matrix left = matmul(matmul(a, b), c);
    const Matrix right = matmul(a, matmul(b, c));
    // Relative to the overall magnitude so near-zero entries do not dominate.
    double scale = 0.0;
    for (double v : right.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < left.size(); ++i) {
      EXPECT_LE(std::abs(left.data()[i] - right.data()[i]), 1e-10 * std::max(scale, 1.0))
          << "seed " << seed;
    }
  }
}

TEST(MatmulTransposed, MatchesExplicitTranspose) {
  SeededRng rng(3);
  const Matrix a = gaussian_matrix(rng, 4, 7);
  const Matrix b = gaussian_matrix(rng, 5, 7);
  EXPECT_LE(max_relative_difference(matmul_transposed(a, b), matmul(a, transpose(b)), 1e-12),
            1e-12);
}

TEST(Matrix, RejectsZeroDimensionsAndNonFinite) {
  EXPECT_THROW(Matrix(0, 3), ShapeError);
  EXPECT_THROW(Matrix(3, 0), ShapeError);
  EXPECT_THROW(Matrix(1, 2, {1.0}), ShapeError);
  EXPECT_THROW(Matrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}), NumericError);
  EXPECT_THROW(Matrix(1, 1, {std::numeric_limits<double>::infinity()}), NumericError);
}

TEST(Matrix, OverflowingProductIsRejected) {
  const Matrix big(1, 1, {1e200});
  EXPECT_THROW(matmul(big, big), NumericError);
}

TEST(ColumnMean, HandAverage) {
  EXPECT_EQ(column_mean(Matrix::from_rows({{1, 3}, {3, 5}})), Matrix::from_rows({{2, 4}}));
}

TEST(ColumnMean, SingleRowIsItself) {
  const Matrix row = Matrix::from_rows({{0.5, -2.0, 7.25}});
  EXPECT_EQ(column_mean(row), row);
}

TEST(ColumnMean, ZeroMatrix) { EXPECT_EQ(column_mean(Matrix(4, 3)), Matrix(1, 3)); }

TEST(GaussianMatrix, SameSeedSameMatrix) {
  SeededRng a(42);
  SeededRng b(42);
  EXPECT_EQ(gaussian_matrix(a, 3, 3), gaussian_matrix(b, 3, 3));
}

TEST(GaussianMatrix, ConsecutiveDrawsDiffer) {
  SeededRng rng(42);
  const Matrix first = gaussian_matrix(rng, 3, 3);
  EXPECT_NE(first, gaussian_matrix(rng, 3, 3));
}

TEST(GaussianMatrix, DifferentSeedsDiffer) {
  SeededRng a(42);
  SeededRng b(43);
  EXPECT_NE(gaussian_matrix(a, 16, 16), gaussian_matrix(b, 16, 16));
}

TEST(GaussianMatrix, MomentsOverAMillionDraws) {
  // Std. error of the mean is 1e-3 and of the variance ~1.4e-3, so the
  // (-0.01, 0.01) and (0.98, 1.02) windows sit at roughly 10 and 14 sigma.
  SeededRng rng(42);
  const Matrix m = gaussian_matrix(rng, 1000, 1000);
  double sum = 0.0;
  for (double v : m.data()) sum += v;
  const double mean = sum / static_cast<double>(m.size());
  double sq = 0.0;
  for (double v : m.data()) sq += (v - mean) * (v - mean);
  const double var = sq / static_cast<double>(m.size() - 1);
  EXPECT_GT(mean, -0.01);
  EXPECT_LT(mean, 0.01);
  EXPECT_GT(var, 0.98);
  EXPECT_LT(var, 1.02);
}

TEST(GaussianMatrix, ZeroDimensionIsShapeError) {
  SeededRng rng(1);
  EXPECT_THROW(gaussian_matrix(rng, 0, 4), ShapeError);
  EXPECT_THROW(gaussian_matrix(rng, 4, 0), ShapeError);
}

TEST(SeededRng, NormalMomentsOverHundredThousandSamples) {
  SeededRng rng(2024);
  constexpr int kSamples = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / kSamples;
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(sq / kSamples - mean * mean, 1.0, 0.1);
}

TEST(SeededRng, UniformIndexStaysInRange) {
  SeededRng rng(9);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.uniform_index(7), 7u);
}

TEST(SeededRng, ShuffleIsAPermutation) {
  SeededRng rng(5);
  std::vector<std::size_t> v(50);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  rng.shuffle(v);
  std::vector<std::size_t> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
}

TEST(RandomOrthonormalRows, RowsAreOrthonormal) {
  SeededRng rng(11);
  const Matrix q = random_orthonormal_rows(rng, 6, 20);
  const Matrix gram = matmul_transposed(q, q);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(gram(i, j), i == j ? 1.0 : 0.0, 1e-12);
}

TEST(LabeledDataset, EnforcesInvariants) {
  EXPECT_THROW(LabeledDataset(Matrix(2, 2), {0, 1}, 1, Split::kTrain), InputError);
  EXPECT_THROW(LabeledDataset(Matrix(2, 2), {0}, 2, Split::kTrain), ShapeError);
  EXPECT_THROW(LabeledDataset(Matrix(2, 2), {0, 2}, 2, Split::kTrain), InputError);
  const LabeledDataset ok(Matrix(2, 2), {0, 1}, 2, Split::kTest);
  EXPECT_EQ(ok.size(), 2u);
  EXPECT_EQ(ok.split(), Split::kTest);
}
