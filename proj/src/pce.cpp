#include "sce/pce.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sce/error.hpp"

namespace sce {

namespace {

void require_uniform(const ProbabilityMeasure& m) {
  if (m.kind() != ProbabilityMeasure::Kind::uniform) {
    throw Error(ErrorKind::invalid_argument, "Legendre polynomials are orthonormal only under a uniform measure");
  }
}

double to_reference(const ProbabilityMeasure& m, double x) {
  return (2.0 * x - m.lower() - m.upper()) / (m.upper() - m.lower());
}

}  // namespace

KnotSequence polynomial_knots(int degree, double lower, double upper) {
  return KnotSequence::open_with_multiplicities(degree, {lower, upper}, {});
}

TensorBasis build_pce_basis(std::span<const int> degrees, std::span<const ProbabilityMeasure> measures) {
  if (degrees.size() != measures.size()) {
    throw Error(ErrorKind::invalid_argument, fmt::format("{} degrees for {} measures", degrees.size(), measures.size()));
  }
  std::vector<KnotSequence> knots;
  knots.reserve(degrees.size());
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    knots.push_back(polynomial_knots(degrees[k], measures[k].lower(), measures[k].upper()));
  }
  return TensorBasis::build(knots, measures);
}

PceModel build_pce(std::span<const int> degrees, std::span<const ProbabilityMeasure> measures,
                   const PointFunction& y, const ProjectionOptions& options) {
  return {project(build_pce_basis(degrees, measures), y, options), std::vector<int>(degrees.begin(), degrees.end())};
}

double orthonormal_legendre(int degree, double t) {
  if (degree < 0) throw Error(ErrorKind::invalid_argument, "negative Legendre degree");
  double p0 = 1.0;
  if (degree == 0) return 1.0;
  double p1 = t;
  for (int k = 2; k <= degree; ++k) {
    const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return std::sqrt(2.0 * degree + 1.0) * p1;
}

double legendre_crosscheck(const TensorBasis& pce_basis) {
  double worst = 0.0;
  for (const auto& axis : pce_basis.axes()) {
    require_uniform(axis.measure());
    const int p = axis.degree();
    // psi * Legendre products have degree 2p; residual squares too.
    const QuadraturePoints pts = CompositeRule::on_knots(axis.knots(), p + 2).expectation_points(axis.measure());
    const std::size_t n = static_cast<std::size_t>(axis.size());

    std::vector<std::vector<double>> psi(pts.nodes.size());
    std::vector<std::vector<double>> leg(pts.nodes.size(), std::vector<double>(n));
    for (std::size_t q = 0; q < pts.nodes.size(); ++q) {
      psi[q] = axis.eval(pts.nodes[q]);
      const double t = to_reference(axis.measure(), pts.nodes[q]);
      for (std::size_t j = 0; j < n; ++j) leg[q][j] = orthonormal_legendre(static_cast<int>(j), t);
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> c(n, 0.0);
      for (std::size_t q = 0; q < pts.nodes.size(); ++q)
        for (std::size_t j = 0; j < n; ++j) c[j] += pts.weights[q] * psi[q][i] * leg[q][j];
      double norm2 = 0.0;
      for (std::size_t q = 0; q < pts.nodes.size(); ++q) {
        double r = psi[q][i];
        for (std::size_t j = 0; j < n; ++j) r -= c[j] * leg[q][j];
        norm2 += pts.weights[q] * r * r;
      }
      worst = std::max(worst, std::sqrt(std::max(0.0, norm2)));
    }
  }
  return worst;
}

double legendre_projection_variance(const std::function<double(double)>& y, int degree,
                                    const ProbabilityMeasure& measure, std::span<const double> breakpoints, int order,
                                    int subdivisions) {
  require_uniform(measure);
  const int q = order > 0 ? order : std::max(degree + 1, 10);
  const QuadraturePoints pts = CompositeRule({measure.lower(), measure.upper()}, q, subdivisions)
                                   .with_breakpoints(breakpoints)
                                   .expectation_points(measure);
  std::vector<double> yv(pts.nodes.size());
  for (std::size_t i = 0; i < yv.size(); ++i) yv[i] = y(pts.nodes[i]);
  std::vector<double> squares;
  for (int j = 1; j <= degree; ++j) {
    std::vector<double> terms(pts.nodes.size());
    for (std::size_t i = 0; i < yv.size(); ++i) {
      terms[i] = pts.weights[i] * yv[i] * orthonormal_legendre(j, to_reference(measure, pts.nodes[i]));
    }
    const double c = pairwise_sum(terms);
    squares.push_back(c * c);
  }
  return pairwise_sum(squares);
}

}  // namespace sce
