#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sce/ortho.hpp"
#include "sce/quadrature.hpp"

namespace sce {

/// Cartesian index grid {0..n_1-1} x ... x {0..n_N-1} enumerated
/// lexicographically (first axis most significant, last axis fastest).
class MultiIndexSet {
 public:
  explicit MultiIndexSet(std::vector<int> counts);

  [[nodiscard]] std::size_t dimension() const noexcept { return counts_.size(); }
  [[nodiscard]] std::span<const int> counts() const noexcept { return counts_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] std::span<const std::size_t> strides() const noexcept { return strides_; }

  [[nodiscard]] std::size_t linear(std::span<const int> index) const;
  [[nodiscard]] std::vector<int> multi(std::size_t linear) const;

 private:
  std::vector<int> counts_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Tensor products Psi_i(x) = prod_k psi_{i_k}(x_k) of univariate orthonormal
/// bases, one per independent input.
class TensorBasis {
 public:
  explicit TensorBasis(std::vector<UnivariateOrthoBasis> axes);

  /// Builds every axis from its knots and measure; 1 <= N <= 6.
  static TensorBasis build(std::span<const KnotSequence> knots, std::span<const ProbabilityMeasure> measures);

  [[nodiscard]] std::size_t dimension() const noexcept { return axes_.size(); }
  [[nodiscard]] const UnivariateOrthoBasis& axis(std::size_t k) const { return axes_.at(k); }
  [[nodiscard]] std::span<const UnivariateOrthoBasis> axes() const noexcept { return axes_; }
  [[nodiscard]] const MultiIndexSet& indices() const noexcept { return indices_; }
  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }

  /// Psi_i(x) evaluated densely; meant for checks rather than hot loops.
  [[nodiscard]] double eval(std::span<const int> index, std::span<const double> x) const;

 private:
  std::vector<UnivariateOrthoBasis> axes_;
  MultiIndexSet indices_;
};

struct ProjectionOptions {
  /// Gauss points per cell; 0 selects max(p_k + 1, 10) on each axis.
  int order = 0;
  int subdivisions = 1;
  /// Extra cell boundaries per axis, e.g. where y has a kink. May be empty or
  /// shorter than the dimension.
  std::vector<std::vector<double>> breakpoints;
  /// Worker threads for the outermost axis; 0 means hardware concurrency.
  unsigned threads = 0;
};

/// Spline chaos expansion: a tensor basis with coefficients stored densely in
/// lexicographic multi-index order. Immutable.
class SceModel {
 public:
  SceModel(TensorBasis basis, std::vector<double> coefficients);

  [[nodiscard]] const TensorBasis& basis() const noexcept { return basis_; }
  [[nodiscard]] std::span<const double> coefficients() const noexcept { return coefficients_; }
  [[nodiscard]] double coefficient(std::span<const int> index) const;

  /// Coefficient of the constant basis function.
  [[nodiscard]] double mean() const noexcept { return coefficients_.front(); }
  /// Sum of squares of all non-constant coefficients.
  [[nodiscard]] double variance() const;
  [[nodiscard]] double second_moment() const;

  /// Surrogate value; sums only the locally supported terms.
  [[nodiscard]] double evaluate(std::span<const double> x) const;

  /// Text form: header with per-axis measure and knots, then one coefficient
  /// per line with 17 significant digits.
  [[nodiscard]] std::string serialize() const;
  static SceModel deserialize(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static SceModel load(const std::filesystem::path& path);

 private:
  TensorBasis basis_;
  std::vector<double> coefficients_;
  // Coefficients with respect to the auxiliary B-spline products, so that
  // evaluation needs only the local auxiliary entries on each axis.
  std::vector<double> auxiliary_coefficients_;
};

/// C_i = E[y(X) Psi_i(X)] for every multi-index in one sweep of the composite
/// tensor grid. The sweep accumulates E[y P_j] for the locally supported
/// auxiliary products and then applies W_k along each axis.
SceModel project(const TensorBasis& basis, const PointFunction& y, const ProjectionOptions& options = {});

/// Applies `m` along axis `axis` of a lexicographic tensor with shape `dims`.
void apply_along_axis(std::vector<double>& tensor, std::span<const int> dims, std::size_t axis, const Matrix& m);

/// `count` independent draws from the product measure, row-major (count x N).
std::vector<double> draw_inputs(const TensorBasis& basis, Rng& rng, std::size_t count);

/// Sorted surrogate values at `count` fresh input draws (empirical CDF).
std::vector<double> resample_cdf(const SceModel& model, Rng& rng, std::size_t count);

/// Two-sample Kolmogorov-Smirnov statistic of two sorted samples.
double ks_distance(std::span<const double> sorted_a, std::span<const double> sorted_b);

}  // namespace sce
