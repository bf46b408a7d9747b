#include "sce/ortho.hpp"

#include <fmt/format.h>

#include "sce/error.hpp"
#include "sce/quadrature.hpp"

namespace sce {

namespace {

void append_auxiliary(const LocalBasis& local, AuxiliaryTerms& out) {
  out.index.clear();
  out.value.clear();
  out.index.push_back(0);
  out.value.push_back(1.0);
  for (std::size_t r = 0; r < local.values.size(); ++r) {
    const int idx = local.first + static_cast<int>(r);
    if (idx == 0) continue;  // B_0 is replaced by the constant.
    out.index.push_back(idx);
    out.value.push_back(local.values[r]);
  }
}

}  // namespace

SplineMomentMatrix gram_matrix(const BsplineBasis& basis, const ProbabilityMeasure& measure) {
  if (basis.lower() != measure.lower() || basis.upper() != measure.upper()) {
    throw Error(ErrorKind::support_mismatch,
                fmt::format("basis on [{}, {}] but measure on [{}, {}]", basis.lower(), basis.upper(), measure.lower(),
                            measure.upper()));
  }
  const auto n = static_cast<std::size_t>(basis.size());
  const CompositeRule rule = CompositeRule::on_knots(basis.knots(), basis.degree() + 1);
  const QuadraturePoints pts = rule.expectation_points(measure);

  Matrix g(n, n);
  AuxiliaryTerms aux;
  for (std::size_t q = 0; q < pts.nodes.size(); ++q) {
    append_auxiliary(basis.eval_local(pts.nodes[q]), aux);
    const double w = pts.weights[q];
    for (std::size_t a = 0; a < aux.index.size(); ++a) {
      const double wa = w * aux.value[a];
      for (std::size_t b = a; b < aux.index.size(); ++b) {
        g(static_cast<std::size_t>(aux.index[a]), static_cast<std::size_t>(aux.index[b])) += wa * aux.value[b];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  // E[1 * 1] is one by normalization of the measure.
  g(0, 0) = 1.0;
  return {std::move(g)};
}

Whitening whiten(const SplineMomentMatrix& gram) {
  Matrix q = cholesky_lower(gram.entries, 1e-12);
  Matrix w = invert_lower_triangular(q);
  return {std::move(q), std::move(w)};
}

UnivariateOrthoBasis::UnivariateOrthoBasis(BsplineBasis basis, ProbabilityMeasure measure)
    : basis_(std::move(basis)),
      measure_(std::move(measure)),
      gram_(gram_matrix(basis_, measure_)),
      whitening_(whiten(gram_)) {}

std::vector<double> UnivariateOrthoBasis::auxiliary(double x) const {
  std::vector<double> p = basis_.eval_all(x);
  p[0] = 1.0;
  return p;
}

AuxiliaryTerms UnivariateOrthoBasis::auxiliary_local(double x) const {
  AuxiliaryTerms out;
  append_auxiliary(basis_.eval_local(x), out);
  return out;
}

std::vector<double> UnivariateOrthoBasis::eval(double x) const {
  const std::vector<double> p = auxiliary(x);
  return multiply(whitening_.whitening, p);
}

}  // namespace sce
