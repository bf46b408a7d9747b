#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sce/tensor_sce.hpp"

namespace sce {

enum class Method { sce, pce };

/// `simple`: equal elements with simple interior knots.
/// `repeated_center`: as `simple`, with the knot at the domain center raised to
/// multiplicity p so the spline is only C0 there (for kinks at the center).
enum class KnotVariant { simple, repeated_center };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(KnotVariant v) noexcept;

/// One (method, degree, mesh) configuration, optionally with the published
/// relative variance error it should reproduce.
struct BenchConfig {
  Method method = Method::sce;
  int degree = 1;
  int elements = 1;  // per axis; always 1 for PCE
  KnotVariant variant = KnotVariant::simple;
  std::string h_label;  // element size as printed, e.g. "1/16" or "2/5"
  std::optional<double> published_value;
};

struct BenchmarkCase {
  std::string name;
  std::string table;  // sub-table the configs belong to ("1a", "1b", "1c", "ode", "sobol4")
  PointFunction y;
  std::vector<ProbabilityMeasure> measures;
  double reference_mean = 0.0;
  double reference_variance = 0.0;
  /// Interior points per axis where y is not smooth (or nearly so). They are
  /// added to every quadrature grid for this case.
  std::vector<double> kinks;
  /// Set when y(x) = prod_k factors[k](x_k); lets the oracle integrate one
  /// axis at a time.
  std::vector<std::function<double(double)>> factors;
  std::vector<BenchConfig> configs;

  [[nodiscard]] std::size_t dimension() const noexcept { return measures.size(); }
};

struct ErrorReport {
  std::string case_name;
  BenchConfig config;
  double h = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double error = 0.0;  // |var[y] - var[y_hat]| / var[y]
};

/// Standard normal CDF through std::erfc (glibc, accurate to a few ulp).
double normal_cdf(double u);

/// sin(3 pi x), X ~ U(-1, 1).
BenchmarkCase case_oscillatory();
/// exp(-3 |x|), X ~ U(-1, 1).
BenchmarkCase case_nonsmooth();
/// Phi(20 x), X ~ U(-1, 1).
BenchmarkCase case_near_discontinuous();
/// Closed-form solution of the two-input boundary-value problem at xi = 1.
BenchmarkCase case_ode();
/// Four-input product of |4x - 2|^(3/5) factors, X ~ U(0, 1)^4.
BenchmarkCase case_sobol4();

/// Looks up a case by name ("oscillatory", "nonsmooth", "near-discontinuous",
/// "ode", "sobol4"). Throws config-parse for unknown names.
BenchmarkCase case_by_name(const std::string& name);
std::vector<std::string> case_names();

/// Knot sequence used on every axis of `bench` for `config`.
KnotSequence bench_knots(const BenchmarkCase& bench, const BenchConfig& config, std::size_t axis);

/// Quadrature used for the case: kinks as breakpoints, and for univariate
/// cases eight subdivisions per element.
ProjectionOptions bench_options(const BenchmarkCase& bench, const BenchConfig& config);

SceModel fit_case(const BenchmarkCase& bench, const BenchConfig& config);

ErrorReport run_case(const BenchmarkCase& bench, const BenchConfig& config);

/// Brute-force moments of y by composite quadrature at twice the default
/// order (20 points per cell), split at the kinks, independent of any
/// expansion. `subdivisions` = 0 picks 64 / 8 / 1 for N = 1 / 2 / more.
/// Separable cases are integrated one axis at a time on meshes graded
/// toward the kinks.
struct Moments {
  double mean = 0.0;
  double second = 0.0;
  [[nodiscard]] double variance() const noexcept { return second - mean * mean; }
};
Moments brute_force_moments(const BenchmarkCase& bench, int subdivisions = 0);

std::string report_csv_header();
std::string report_csv_row(const ErrorReport& report);

}  // namespace sce
