#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace subspace {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Always at least 1x1 and always finite;
/// constructors reject anything else. Treat instances as values: the mutable
/// accessors exist for kernels that build a result in place.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix row_vector(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> mutable_data() noexcept { return data_; }

  /// "RxC", used in error messages.
  std::string shape_string() const;

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);

/// a * b^T without materializing the transpose.
Matrix matmul_transposed(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

/// 1 x cols matrix holding the arithmetic mean of each column.
Matrix column_mean(const Matrix& x);

/// Subtracts a 1 x cols row from every row of x.
Matrix subtract_row(const Matrix& x, const Matrix& row);

/// Rows [begin, end) of x.
Matrix slice_rows(const Matrix& x, std::size_t begin, std::size_t end);

/// Gathers the given rows of x in order.
Matrix gather_rows(const Matrix& x, std::span<const std::size_t> indices);

Matrix scaled(const Matrix& x, double factor);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Largest |a_ij - b_ij| / max(|b_ij|, floor). Shapes must agree.
double max_relative_difference(const Matrix& a, const Matrix& b, double floor = 1e-300);

/// Modified Gram-Schmidt on the rows, in place. Returns false if a row is
/// (numerically) in the span of the earlier ones.
bool orthonormalize_rows(Matrix& m);

/// Throws NumericError naming `what` if any value is non-finite.
void require_finite(const Matrix& m, const std::string& what);

}  // namespace subspace
