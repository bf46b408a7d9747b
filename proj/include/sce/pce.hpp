#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sce/tensor_sce.hpp"

namespace sce {

/// Polynomial chaos expansion realized as a spline chaos expansion whose knot
/// sequences have no interior knots, {a^(p+1), b^(p+1)} on every axis. The
/// spline space is then the full polynomial space of degree p.
struct PceModel {
  SceModel sce;
  std::vector<int> degrees;
};

/// Knot sequence without interior knots on [lower, upper].
KnotSequence polynomial_knots(int degree, double lower, double upper);

TensorBasis build_pce_basis(std::span<const int> degrees, std::span<const ProbabilityMeasure> measures);

PceModel build_pce(std::span<const int> degrees, std::span<const ProbabilityMeasure> measures,
                   const PointFunction& y, const ProjectionOptions& options = {});

/// Orthonormal Legendre polynomial sqrt(2n + 1) P_n(t) on [-1, 1].
double orthonormal_legendre(int degree, double t);

/// Largest L2 residual of projecting each axis' orthonormal basis functions
/// onto the orthonormal Legendre polynomials of the same degree range. Near
/// zero when both sets span the same polynomial space. Uniform measures only.
double legendre_crosscheck(const TensorBasis& pce_basis);

/// Variance of the degree-p Legendre projection of a univariate y under a
/// uniform measure, computed directly from Legendre coefficients. Independent
/// of the spline code path.
double legendre_projection_variance(const std::function<double(double)>& y, int degree,
                                    const ProbabilityMeasure& measure, std::span<const double> breakpoints = {},
                                    int order = 0, int subdivisions = 1);

}  // namespace sce
