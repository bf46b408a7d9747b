#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sce {

/// Dense row-major matrix of doubles. Sizes here are small (n <= a few
/// hundred), so no blocking or expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  [[nodiscard]] Matrix transposed() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// y = A x
std::vector<double> multiply(const Matrix& a, std::span<const double> x);

/// Largest |a_ij - b_ij|; matrices must have equal shape.
double max_abs_difference(const Matrix& a, const Matrix& b);

/// Lower-triangular Q with A = Q Q^T and positive diagonal. Throws
/// not-positive-definite when a pivot falls below
/// `relative_tolerance * max_i A_ii`.
Matrix cholesky_lower(const Matrix& a, double relative_tolerance = 1e-12);

/// Inverse of a nonsingular lower-triangular matrix (again lower-triangular).
Matrix invert_lower_triangular(const Matrix& l);

}  // namespace sce
