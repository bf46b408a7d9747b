#pragma once

#include <span>
#include <string>
#include <vector>

namespace sce {

/// Half-open element [lower, upper) of the mesh cut out by distinct knots.
struct Element {
  double lower;
  double upper;
  [[nodiscard]] double width() const noexcept { return upper - lower; }
};

/// (p+1)-open knot sequence stored in compressed form.
///
/// The canonical data are the strictly increasing distinct knots and their
/// multiplicities; the end knots always carry multiplicity p + 1 and interior
/// knots carry between 1 and p + 1. The expanded, non-decreasing knot vector is
/// derived on demand. Knots are compared exactly: nearly equal coordinates are
/// never merged, so a repeated knot must be requested through its multiplicity.
class KnotSequence {
 public:
  /// `elements` equal-width elements on [lower, upper] with simple interior knots.
  static KnotSequence open_uniform(int degree, double lower, double upper, int elements);

  /// Open sequence over `distinct` (which includes both end points) with the
  /// given multiplicities for the interior knots, in order.
  static KnotSequence open_with_multiplicities(int degree, std::vector<double> distinct,
                                               std::vector<int> interior_multiplicities);

  /// Recompresses an expanded (p+1)-open knot vector.
  static KnotSequence from_expanded(int degree, std::span<const double> expanded);

  /// Parses `p; z1^m1, z2^m2, ...`. A missing `^m` means one for interior
  /// knots and p+1 for the two end knots.
  static KnotSequence parse(const std::string& text);

  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] std::span<const double> distinct() const noexcept { return distinct_; }
  [[nodiscard]] std::span<const int> multiplicities() const noexcept { return multiplicities_; }
  [[nodiscard]] double lower() const noexcept { return distinct_.front(); }
  [[nodiscard]] double upper() const noexcept { return distinct_.back(); }

  /// Number of B-splines, n = sum of interior multiplicities + p + 1.
  [[nodiscard]] int basis_count() const noexcept { return basis_count_; }

  [[nodiscard]] const std::vector<double>& expanded() const noexcept { return expanded_; }

  [[nodiscard]] std::vector<Element> elements() const;

  /// Largest element width h.
  [[nodiscard]] double max_element_size() const noexcept;

  /// Returns a copy with `knot` inserted (or its multiplicity raised) so that
  /// it ends up with multiplicity `multiplicity`.
  [[nodiscard]] KnotSequence with_knot(double knot, int multiplicity) const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const KnotSequence&, const KnotSequence&) = default;

 private:
  KnotSequence(int degree, std::vector<double> distinct, std::vector<int> multiplicities);

  int degree_ = 0;
  std::vector<double> distinct_;
  std::vector<int> multiplicities_;
  std::vector<double> expanded_;
  int basis_count_ = 0;
};

}  // namespace sce
