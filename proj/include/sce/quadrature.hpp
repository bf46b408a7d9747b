#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sce/knots.hpp"
#include "sce/measure.hpp"

namespace sce {

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2 * order - 1.
struct GaussRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (order >= 1). Thread-safe.
const GaussRule& gauss_legendre(int order);

/// Flattened nodes and weights of a one-dimensional rule.
struct QuadraturePoints {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite Gauss rule over a partition of [a, b].
///
/// Cells are delimited by `breakpoints` (which include both end points); each
/// cell is split into `subdivisions` equal pieces carrying a Gauss rule of
/// `order` points. Building cells from the distinct knots makes any piecewise
/// polynomial of degree <= 2 * order - 1 on the mesh integrate exactly.
class CompositeRule {
 public:
  CompositeRule(std::vector<double> breakpoints, int order, int subdivisions = 1);

  /// Cells are the elements of the knot sequence.
  static CompositeRule on_knots(const KnotSequence& knots, int order, int subdivisions = 1);

  /// Copy with additional cell boundaries. Points outside the open interval
  /// (a, b) and points already present are ignored.
  [[nodiscard]] CompositeRule with_breakpoints(std::span<const double> extra) const;

  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] int order() const noexcept { return order_; }
  [[nodiscard]] int subdivisions() const noexcept { return subdivisions_; }
  [[nodiscard]] double lower() const noexcept { return breakpoints_.front(); }
  [[nodiscard]] double upper() const noexcept { return breakpoints_.back(); }

  /// Nodes and Lebesgue weights.
  [[nodiscard]] QuadraturePoints points() const;

  /// Nodes and weights for expectations under `measure`: the density's own
  /// breakpoints are merged in and folded into the weights. Throws
  /// support-mismatch when the rule and measure cover different intervals.
  [[nodiscard]] QuadraturePoints expectation_points(const ProbabilityMeasure& measure) const;

 private:
  std::vector<double> breakpoints_;
  int order_ = 1;
  int subdivisions_ = 1;
};

/// Sum of `terms` by recursive halving; the grouping depends only on the length.
double pairwise_sum(std::span<const double> terms);

double integrate_1d(const CompositeRule& rule, const std::function<double(double)>& f);

using PointFunction = std::function<double(std::span<const double>)>;

/// Tensor-product integral over the cells of `rules` (N <= 6). The outermost
/// axis may be split across `threads` workers; partial sums are combined by
/// pairwise reduction in a fixed order, so the result does not depend on the
/// thread count.
double integrate_nd(std::span<const CompositeRule> rules, const PointFunction& f, unsigned threads = 1);

/// Same as above over precomputed (possibly density-weighted) points.
double integrate_nd(std::span<const QuadraturePoints> axes, const PointFunction& f, unsigned threads = 1);

/// Visits every tensor grid point in lexicographic order (last axis fastest)
/// with the product weight. One sweep can feed any number of accumulators.
void sweep_nd(std::span<const QuadraturePoints> axes,
              const std::function<void(std::span<const double> x, double weight)>& visit);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled exactly once; callers write results to per-index slots.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Resolves a thread-count request; 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested) noexcept;

}  // namespace sce
