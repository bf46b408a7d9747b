#include "sce/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sce/error.hpp"

namespace sce {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::invalid_argument, fmt::format("{}x{} times {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

Matrix cholesky_lower(const Matrix& a, double relative_tolerance) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::invalid_argument, "Cholesky of a non-square matrix");
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double floor = relative_tolerance * max_diag;

  Matrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= q(j, k) * q(j, k);
    if (!(pivot > floor)) {
      throw Error(ErrorKind::not_positive_definite,
                  fmt::format("pivot {} at row {} (floor {})", pivot, j, floor));
    }
    const double d = std::sqrt(pivot);
    q(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= q(i, k) * q(j, k);
      q(i, j) = s / d;
    }
  }
  return q;
}

Matrix invert_lower_triangular(const Matrix& l) {
  const std::size_t n = l.rows();
  Matrix w(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    // Column j of the inverse by forward substitution on e_j.
    w(j, j) = 1.0 / l(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s -= l(i, k) * w(k, j);
      w(i, j) = s / l(i, i);
    }
  }
  return w;
}

}  // namespace sce
