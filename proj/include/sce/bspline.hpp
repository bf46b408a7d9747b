#pragma once

#include <span>
#include <vector>

#include "sce/knots.hpp"

namespace sce {

/// Values of the p + 1 B-splines that may be nonzero on one knot span.
/// `values[r]` belongs to basis index `first + r`.
struct LocalBasis {
  int first = 0;
  std::vector<double> values;
};

/// B-splines of degree p over an open knot sequence, evaluated with the
/// Cox-de Boor recurrence. Basis indices are zero-based: 0 <= i < n.
///
/// Spans are half-open, [xi_j, xi_{j+1}), except that the right end point b
/// belongs to the last nonempty span so the basis still sums to one there.
class BsplineBasis {
 public:
  explicit BsplineBasis(KnotSequence knots);

  [[nodiscard]] const KnotSequence& knots() const noexcept { return knots_; }
  [[nodiscard]] int degree() const noexcept { return knots_.degree(); }
  [[nodiscard]] int size() const noexcept { return knots_.basis_count(); }
  [[nodiscard]] double lower() const noexcept { return knots_.lower(); }
  [[nodiscard]] double upper() const noexcept { return knots_.upper(); }

  /// Index j of the expanded knot vector with xi_j <= x < xi_{j+1} and
  /// p <= j <= n - 1. Throws out-of-domain outside [a, b].
  [[nodiscard]] int find_span(double x) const;

  /// The p + 1 possibly nonzero B-splines at x.
  [[nodiscard]] LocalBasis eval_local(double x) const;

  /// Polynomial piece of the basis on span `span`, evaluated at any x (the
  /// piece is extended beyond its span). Used for one-sided limits at knots.
  [[nodiscard]] LocalBasis eval_piece(int span, double x) const;

  /// All n B-spline values at x.
  [[nodiscard]] std::vector<double> eval_all(double x) const;

  /// B_i(x); exactly zero outside the support [xi_i, xi_{i+p+1}).
  [[nodiscard]] double eval_single(int i, double x) const;

  /// Continuity order p - m at interior distinct knot `knot_index`
  /// (1 <= knot_index <= r - 2). A value of -1 means a jump is permitted.
  [[nodiscard]] int smoothness_at(int knot_index) const;

 private:
  void check_domain(double x) const;

  KnotSequence knots_;
  std::vector<double> xi_;
  int last_span_ = 0;
};

}  // namespace sce
