#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace sce {

/// Pseudo-random stream used for all sampling. The engine is fixed so that a
/// seed reproduces the same draws on every platform with the same libstdc++.
using Rng = std::mt19937_64;

/// Uniform draw on [0, 1) built from the top 53 bits of one engine output.
/// Avoids std::uniform_real_distribution, whose algorithm is unspecified.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Marginal law of one input variable on a bounded interval [lower, upper].
///
/// Two densities are supported: the uniform law and a tabulated density that
/// is piecewise linear between the supplied grid points. Tabulated densities
/// are renormalized at construction so the total mass is one. Instances are
/// immutable.
class ProbabilityMeasure {
 public:
  enum class Kind { uniform, tabulated };

  static ProbabilityMeasure uniform(double lower, double upper);

  /// Piecewise-linear density through (x[i], f[i]). The grid must be strictly
  /// increasing; its first and last points define the support.
  static ProbabilityMeasure tabulated(std::vector<double> x, std::vector<double> f);

  /// Parses `uniform(a,b)` or `tabulated(x0:f0, x1:f1, ...)`.
  static ProbabilityMeasure parse(const std::string& text);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] double lower() const noexcept { return lower_; }
  [[nodiscard]] double upper() const noexcept { return upper_; }

  [[nodiscard]] double density(double x) const;
  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double inverse_cdf(double u) const;

  /// E[X^l]; closed form for the uniform law, exact Gauss sums otherwise.
  [[nodiscard]] double raw_moment(unsigned l) const;

  /// Interior points where the density is not smooth. Quadrature rules split
  /// cells there so that products of splines and density stay polynomial.
  [[nodiscard]] std::span<const double> breakpoints() const noexcept;

  /// `count` inverse-CDF draws, consuming one engine output per draw.
  [[nodiscard]] std::vector<double> sample(Rng& rng, std::size_t count) const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const ProbabilityMeasure&, const ProbabilityMeasure&) = default;

 private:
  ProbabilityMeasure() = default;

  Kind kind_ = Kind::uniform;
  double lower_ = 0.0;
  double upper_ = 1.0;
  // Tabulated only.
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
  std::vector<double> interior_;
};

}  // namespace sce
