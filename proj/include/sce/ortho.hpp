#pragma once

#include <vector>

#include "sce/bspline.hpp"
#include "sce/linalg.hpp"
#include "sce/measure.hpp"

namespace sce {

/// Gram matrix G = E[P P^T] of the auxiliary vector P = (1, B_1, ..., B_{n-1}),
/// i.e. the B-spline vector with its first entry replaced by the constant one.
/// Symmetric positive-definite with G(0, 0) = 1.
struct SplineMomentMatrix {
  Matrix entries;
};

/// Cholesky factor Q of G (G = Q Q^T) and the whitening matrix W = Q^{-1}.
/// Both are lower-triangular.
struct Whitening {
  Matrix factor;
  Matrix whitening;
};

/// Nonzero entries of the auxiliary vector at one point. Entry 0 (the
/// constant) always comes first.
struct AuxiliaryTerms {
  std::vector<int> index;
  std::vector<double> value;
};

/// Gram matrix by per-element Gauss quadrature of order p + 1, which is exact
/// for the uniform and piecewise-linear densities supported here. Throws
/// support-mismatch when basis and measure live on different intervals.
SplineMomentMatrix gram_matrix(const BsplineBasis& basis, const ProbabilityMeasure& measure);

/// Throws not-positive-definite when a Cholesky pivot drops below 1e-12 times
/// the largest diagonal entry.
Whitening whiten(const SplineMomentMatrix& gram);

/// Measure-consistent orthonormal B-splines psi = W P.
///
/// The lower-triangular W maps the constant auxiliary entry to itself, so
/// psi_0 is identically one, E[psi] = e_0 and E[psi psi^T] = I.
class UnivariateOrthoBasis {
 public:
  UnivariateOrthoBasis(BsplineBasis basis, ProbabilityMeasure measure);

  [[nodiscard]] const BsplineBasis& basis() const noexcept { return basis_; }
  [[nodiscard]] const KnotSequence& knots() const noexcept { return basis_.knots(); }
  [[nodiscard]] const ProbabilityMeasure& measure() const noexcept { return measure_; }
  [[nodiscard]] const SplineMomentMatrix& gram() const noexcept { return gram_; }
  [[nodiscard]] const Matrix& cholesky_factor() const noexcept { return whitening_.factor; }
  [[nodiscard]] const Matrix& whitening() const noexcept { return whitening_.whitening; }
  [[nodiscard]] int size() const noexcept { return basis_.size(); }
  [[nodiscard]] int degree() const noexcept { return basis_.degree(); }

  /// Dense auxiliary vector P(x).
  [[nodiscard]] std::vector<double> auxiliary(double x) const;
  [[nodiscard]] AuxiliaryTerms auxiliary_local(double x) const;

  /// psi(x) = W P(x); entry 0 is exactly one.
  [[nodiscard]] std::vector<double> eval(double x) const;

 private:
  BsplineBasis basis_;
  ProbabilityMeasure measure_;
  SplineMomentMatrix gram_;
  Whitening whitening_;
};

}  // namespace sce
