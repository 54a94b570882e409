#include "subspace/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "subspace/error.hpp"

namespace subspace {

namespace {

void require_nonzero_shape(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw ShapeError("matrix dimensions must be positive, got " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  require_nonzero_shape(rows, cols);
  data_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_nonzero_shape(rows, cols);
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix " + shape_string() + " needs " + std::to_string(rows * cols) +
                     " values, got " + std::to_string(data_.size()));
  }
  require_finite(*this, "matrix data");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ShapeError("matrix needs at least one row");
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ShapeError("ragged rows in matrix literal");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Matrix Matrix::row_vector(std::span<const double> values) {
  return Matrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_finite(const Matrix& m, const std::string& what) {
  if (!m.all_finite()) throw NumericError(what + " contains non-finite values");
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul shape mismatch: " + a.shape_string() + " x " + b.shape_string());
  }
  Matrix out(a.rows(), b.cols());
  // i-k-j order keeps the inner loop contiguous in both b and out.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  require_finite(out, "matmul result");
  return out;
}

Matrix matmul_transposed(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul shape mismatch: " + a.shape_string() + " x (" + b.shape_string() +
                     ")^T");
  }
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto a_row = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = dot(a_row, b.row(j));
  }
  require_finite(out, "matmul result");
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix column_mean(const Matrix& x) {
  Matrix mean(1, x.cols());
  auto acc = mean.row(0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto r = x.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) acc[j] += r[j];
  }
  const double inv = 1.0 / static_cast<double>(x.rows());
  for (double& v : acc) v *= inv;
  return mean;
}

Matrix subtract_row(const Matrix& x, const Matrix& row) {
  if (row.rows() != 1 || row.cols() != x.cols()) {
    throw ShapeError("cannot subtract row " + row.shape_string() + " from " + x.shape_string());
  }
  Matrix out = x;
  const auto r = row.row(0);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto o = out.row(i);
    for (std::size_t j = 0; j < out.cols(); ++j) o[j] -= r[j];
  }
  require_finite(out, "centered matrix");
  return out;
}

Matrix slice_rows(const Matrix& x, std::size_t begin, std::size_t end) {
  if (begin >= end || end > x.rows()) {
    throw ShapeError("row slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                     ") out of range for " + x.shape_string());
  }
  const auto first = x.data().begin() + static_cast<std::ptrdiff_t>(begin * x.cols());
  const auto last = x.data().begin() + static_cast<std::ptrdiff_t>(end * x.cols());
  return Matrix(end - begin, x.cols(), std::vector<double>(first, last));
}

Matrix gather_rows(const Matrix& x, std::span<const std::size_t> indices) {
  if (indices.empty()) throw ShapeError("gather_rows needs at least one index");
  Matrix out(indices.size(), x.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= x.rows()) throw ShapeError("gather_rows index out of range");
    std::copy_n(x.row(indices[i]).begin(), x.cols(), out.row(i).begin());
  }
  return out;
}

Matrix scaled(const Matrix& x, double factor) {
  Matrix out = x;
  for (double& v : out.mutable_data()) v *= factor;
  require_finite(out, "scaled matrix");
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double max_relative_difference(const Matrix& a, const Matrix& b, double floor) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("cannot compare " + a.shape_string() + " with " + b.shape_string());
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max(std::abs(b.data()[i]), floor);
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]) / denom);
  }
  return worst;
}

bool orthonormalize_rows(Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto ri = m.row(i);
    // Two passes keep orthogonality at machine precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        const auto rj = m.row(j);
        const double proj = dot(ri, rj);
        for (std::size_t c = 0; c < m.cols(); ++c) ri[c] -= proj * rj[c];
      }
    }
    const double norm = std::sqrt(squared_norm(ri));
    if (norm < 1e-12) return false;
    for (double& v : ri) v /= norm;
  }
  return true;
}

}  // namespace subspace
