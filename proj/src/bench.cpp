#include "sce/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "sce/error.hpp"

namespace sce {

std::string_view to_string(Method m) noexcept { return m == Method::sce ? "SCE" : "PCE"; }

std::string_view to_string(KnotVariant v) noexcept {
  return v == KnotVariant::simple ? "simple" : "repeated-center";
}

double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

namespace {

BenchConfig pce(int p, std::optional<double> published = std::nullopt) {
  return {Method::pce, p, 1, KnotVariant::simple, "", published};
}

BenchConfig sce_cfg(int p, int elements, KnotVariant v, std::string h, std::optional<double> published = std::nullopt) {
  return {Method::sce, p, elements, v, std::move(h), published};
}

// Element counts on [-1, 1] for the printed element sizes.
struct Mesh {
  int elements;
  const char* h;
};
constexpr Mesh even_meshes[] = {{4, "1/2"}, {8, "1/4"}, {16, "1/8"}, {24, "1/12"}, {32, "1/16"}};
constexpr Mesh odd_meshes[] = {{5, "2/5"}, {9, "2/9"}, {17, "2/17"}, {25, "2/25"}, {33, "2/33"}};

void add_sce_column(BenchmarkCase& c, int p, const Mesh (&meshes)[5], KnotVariant v, const double (&published)[5]) {
  for (std::size_t i = 0; i < 5; ++i) c.configs.push_back(sce_cfg(p, meshes[i].elements, v, meshes[i].h, published[i]));
}

// 1-D moments of y on [lower, upper] under the uniform density, by composite
// Gauss quadrature split at `kinks`.
std::pair<double, double> uniform_moments_1d(const std::function<double(double)>& y, double lower, double upper,
                                             std::vector<double> kinks, int order, int subdivisions) {
  const QuadraturePoints pts = CompositeRule({lower, upper}, order, subdivisions).with_breakpoints(kinks).points();
  std::vector<double> m1(pts.nodes.size());
  std::vector<double> m2(pts.nodes.size());
  for (std::size_t q = 0; q < pts.nodes.size(); ++q) {
    const double v = y(pts.nodes[q]);
    const double w = pts.weights[q] / (upper - lower);
    m1[q] = w * v;
    m2[q] = w * v * v;
  }
  return {pairwise_sum(m1), pairwise_sum(m2)};
}

}  // namespace

BenchmarkCase case_oscillatory() {
  BenchmarkCase c;
  c.name = "oscillatory";
  c.table = "1a";
  c.y = [](std::span<const double> x) { return std::sin(3.0 * std::numbers::pi * x[0]); };
  c.measures = {ProbabilityMeasure::uniform(-1.0, 1.0)};
  // Closed form: odd integrand, and E[sin^2] = 1/2 over whole periods.
  c.reference_mean = 0.0;
  c.reference_variance = 0.5;

  // Published errors for this function: polynomial row, then one row per degree.
  const int pce_degrees[] = {1, 3, 5, 7, 9};
  const double pce_published[] = {0.932453, 0.823578, 0.822617, 0.292768, 0.0279709};
  for (std::size_t i = 0; i < 5; ++i) c.configs.push_back(pce(pce_degrees[i], pce_published[i]));
  add_sce_column(c, 1, even_meshes, KnotVariant::simple, {0.719505, 0.0936391, 3.56392e-3, 6.05231e-4, 1.80817e-4});
  add_sce_column(c, 2, even_meshes, KnotVariant::simple, {0.755454, 0.0404491, 1.5349e-4, 9.8752e-6, 1.56899e-6});
  add_sce_column(c, 3, even_meshes, KnotVariant::simple, {0.815119, 0.0107727, 8.20356e-6, 1.95148e-7, 1.6e-8});
  return c;
}

BenchmarkCase case_nonsmooth() {
  BenchmarkCase c;
  c.name = "nonsmooth";
  c.table = "1b";
  c.y = [](std::span<const double> x) { return std::exp(-3.0 * std::abs(x[0])); };
  c.measures = {ProbabilityMeasure::uniform(-1.0, 1.0)};
  // Closed form: E[y] = (1 - e^-3) / 3, E[y^2] = (1 - e^-6) / 6.
  c.reference_mean = -std::expm1(-3.0) / 3.0;
  c.reference_variance = -std::expm1(-6.0) / 6.0 - c.reference_mean * c.reference_mean;
  c.kinks = {0.0};

  // Published errors: polynomial row, odd meshes, then meshes with a repeated center knot.
  const int pce_degrees[] = {1, 2, 4, 8, 20};
  const double pce_published[] = {1.0, 0.325922, 0.124885, 0.0301413, 0.0037569};
  for (std::size_t i = 0; i < 5; ++i) c.configs.push_back(pce(pce_degrees[i], pce_published[i]));
  add_sce_column(c, 1, odd_meshes, KnotVariant::simple, {0.122349, 0.026662, 4.42555e-3, 1.43968e-3, 6.36083e-4});
  add_sce_column(c, 2, odd_meshes, KnotVariant::simple, {0.0212933, 3.74539e-3, 5.48633e-4, 1.71708e-4, 7.45087e-5});
  add_sce_column(c, 1, even_meshes, KnotVariant::repeated_center,
                 {0.0167023, 1.13075e-3, 7.00943e-5, 1.377e-5, 4.34601e-6});
  add_sce_column(c, 2, even_meshes, KnotVariant::repeated_center,
                 {4.96606e-4, 9.37131e-6, 1.76989e-7, 1.68832e-8, 3.14213e-9});
  return c;
}

BenchmarkCase case_near_discontinuous() {
  BenchmarkCase c;
  c.name = "near-discontinuous";
  c.table = "1c";
  c.y = [](std::span<const double> x) { return normal_cdf(20.0 * x[0]); };
  c.measures = {ProbabilityMeasure::uniform(-1.0, 1.0)};
  c.kinks = {0.0};
  // Phi(20x) + Phi(-20x) = 1 makes the mean exactly 1/2. The second moment has
  // no elementary closed form; it comes from a converged composite rule
  // (30 points on each of 2 x 128 cells).
  c.reference_mean = 0.5;
  const auto [m1, m2] = uniform_moments_1d([](double x) { return normal_cdf(20.0 * x); }, -1.0, 1.0, {0.0}, 30, 128);
  (void)m1;
  c.reference_variance = m2 - 0.25;

  // Published errors: polynomial row, odd meshes, then even meshes.
  const int pce_degrees[] = {1, 3, 5, 9, 21};
  const double pce_published[] = {0.209125, 0.0966401, 0.0543964, 0.0212929, 0.0017763};
  for (std::size_t i = 0; i < 5; ++i) c.configs.push_back(pce(pce_degrees[i], pce_published[i]));
  add_sce_column(c, 1, odd_meshes, KnotVariant::simple, {0.0198118, 2.59428e-3, 2.19365e-4, 1.82967e-4, 7.0312e-5});
  add_sce_column(c, 2, odd_meshes, KnotVariant::simple, {0.0574063, 0.0184093, 2.05094e-3, 1.81128e-4, 1.50297e-5});
  add_sce_column(c, 1, even_meshes, KnotVariant::simple, {0.0983968, 0.0299556, 3.89483e-3, 4.98215e-4, 9.23004e-5});
  add_sce_column(c, 2, even_meshes, KnotVariant::simple, {0.0308548, 5.54174e-3, 5.25409e-5, 2.10786e-5, 1.036e-5});
  return c;
}

BenchmarkCase case_ode() {
  BenchmarkCase c;
  c.name = "ode";
  c.table = "ode";
  // y(1; x1, x2) = exp(-|x1|) [1 + exp(|x2|) / 2].
  c.y = [](std::span<const double> x) { return std::exp(-std::abs(x[0])) * (1.0 + 0.5 * std::exp(std::abs(x[1]))); };
  c.measures = {ProbabilityMeasure::uniform(-1.0, 1.0), ProbabilityMeasure::uniform(-1.0, 1.0)};
  c.kinks = {0.0};
  const double e = std::numbers::e;
  // Closed form: E[y] ~ 1.1752 and E[y^2] ~ 1.52048.
  c.reference_mean = (1.0 / e) * (1.0 + 0.5 * (e - 1.0)) * (e - 1.0);
  const double second = (e * e + 8.0 * e - 1.0) * (e * e - 1.0) / (16.0 * e * e);
  c.reference_variance = second - c.reference_mean * c.reference_mean;

  c.configs.push_back(pce(2, 0.116812));
  c.configs.push_back(pce(16, 2.26714e-3));
  c.configs.push_back(sce_cfg(1, 20, KnotVariant::simple, "1/10", 1.86149e-6));
  c.configs.push_back(sce_cfg(2, 20, KnotVariant::simple, "1/10", 3.54972e-4));
  c.configs.push_back(sce_cfg(2, 20, KnotVariant::repeated_center, "1/10", 4.0056e-10));
  return c;
}

namespace {

constexpr double sobol_a[4] = {0.0, 1.0, 2.0, 4.0};
constexpr double sobol_b = 0.6;

}  // namespace

BenchmarkCase case_sobol4() {
  BenchmarkCase c;
  c.name = "sobol4";
  c.table = "sobol4";
  c.y = [](std::span<const double> x) {
    double v = 1.0;
    for (std::size_t i = 0; i < 4; ++i) v *= (std::pow(std::abs(4.0 * x[i] - 2.0), sobol_b) + sobol_a[i]) / (1.0 + sobol_a[i]);
    return v;
  };
  for (double a : sobol_a) {
    c.factors.push_back([a](double x) { return (std::pow(std::abs(4.0 * x - 2.0), sobol_b) + a) / (1.0 + a); });
  }
  c.measures.assign(4, ProbabilityMeasure::uniform(0.0, 1.0));
  c.kinks = {0.5};
  // Closed form per factor: E|4X - 2|^s = 2^s / (s + 1) for X ~ U(0, 1).
  const double g1 = std::pow(2.0, sobol_b) / (sobol_b + 1.0);
  const double g2 = std::pow(2.0, 2.0 * sobol_b) / (2.0 * sobol_b + 1.0);
  double mean = 1.0;
  double second = 1.0;
  for (double a : sobol_a) {
    mean *= (g1 + a) / (1.0 + a);
    second *= (g2 + 2.0 * a * g1 + a * a) / ((1.0 + a) * (1.0 + a));
  }
  c.reference_mean = mean;
  c.reference_variance = second - mean * mean;

  for (int p : {2, 4, 8}) c.configs.push_back(pce(p));
  c.configs.push_back(sce_cfg(2, 2, KnotVariant::repeated_center, "1/2"));
  c.configs.push_back(sce_cfg(2, 4, KnotVariant::repeated_center, "1/4"));
  c.configs.push_back(sce_cfg(2, 8, KnotVariant::repeated_center, "1/8"));
  return c;
}

std::vector<std::string> case_names() { return {"oscillatory", "nonsmooth", "near-discontinuous", "ode", "sobol4"}; }

BenchmarkCase case_by_name(const std::string& name) {
  if (name == "oscillatory") return case_oscillatory();
  if (name == "nonsmooth") return case_nonsmooth();
  if (name == "near-discontinuous") return case_near_discontinuous();
  if (name == "ode") return case_ode();
  if (name == "sobol4") return case_sobol4();
  throw Error(ErrorKind::config_parse, fmt::format("unknown builtin '{}'", name));
}

KnotSequence bench_knots(const BenchmarkCase& bench, const BenchConfig& config, std::size_t axis) {
  const ProbabilityMeasure& m = bench.measures.at(axis);
  KnotSequence knots = KnotSequence::open_uniform(config.degree, m.lower(), m.upper(),
                                                  config.method == Method::pce ? 1 : config.elements);
  if (config.method == Method::sce && config.variant == KnotVariant::repeated_center) {
    knots = knots.with_knot(0.5 * (m.lower() + m.upper()), std::max(1, config.degree));
  }
  return knots;
}

ProjectionOptions bench_options(const BenchmarkCase& bench, const BenchConfig& /*config*/) {
  ProjectionOptions options;
  options.breakpoints.assign(bench.dimension(), bench.kinks);
  options.subdivisions = bench.dimension() == 1 ? 8 : 1;
  return options;
}

SceModel fit_case(const BenchmarkCase& bench, const BenchConfig& config) {
  std::vector<KnotSequence> knots;
  for (std::size_t k = 0; k < bench.dimension(); ++k) knots.push_back(bench_knots(bench, config, k));
  return project(TensorBasis::build(knots, bench.measures), bench.y, bench_options(bench, config));
}

ErrorReport run_case(const BenchmarkCase& bench, const BenchConfig& config) {
  const SceModel model = fit_case(bench, config);
  ErrorReport r;
  r.case_name = bench.name;
  r.config = config;
  r.h = bench_knots(bench, config, 0).max_element_size();
  r.mean = model.mean();
  r.variance = model.variance();
  r.error = std::abs(bench.reference_variance - r.variance) / bench.reference_variance;
  return r;
}

Moments brute_force_moments(const BenchmarkCase& bench, int subdivisions) {
  const std::size_t n = bench.dimension();
  if (subdivisions <= 0) subdivisions = n == 1 ? 64 : (n == 2 ? 8 : 1);
  Moments out;
  if (!bench.factors.empty()) {
    // Independent inputs: moments of a product are products of moments.
    // Cells shrink geometrically toward each kink, where the factors may
    // have unbounded derivatives.
    out.mean = 1.0;
    out.second = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& m = bench.measures[k];
      std::vector<double> extra;
      for (double z : bench.kinks) {
        for (int j = 1; j <= 40; ++j) {
          const double s = std::pow(0.3, j);
          extra.push_back(z - s * (z - m.lower()));
          extra.push_back(z + s * (m.upper() - z));
        }
      }
      const auto pts = CompositeRule({m.lower(), m.upper()}, 20, subdivisions)
                           .with_breakpoints(bench.kinks)
                           .with_breakpoints(extra)
                           .expectation_points(m);
      std::vector<double> g1(pts.nodes.size()), g2(pts.nodes.size());
      for (std::size_t q = 0; q < pts.nodes.size(); ++q) {
        const double v = bench.factors[k](pts.nodes[q]);
        g1[q] = pts.weights[q] * v;
        g2[q] = pts.weights[q] * v * v;
      }
      out.mean *= pairwise_sum(g1);
      out.second *= pairwise_sum(g2);
    }
    return out;
  }
  std::vector<QuadraturePoints> axes;
  for (const auto& m : bench.measures) {
    axes.push_back(CompositeRule({m.lower(), m.upper()}, 20, subdivisions).with_breakpoints(bench.kinks).expectation_points(m));
  }
  out.mean = integrate_nd(std::span<const QuadraturePoints>(axes), bench.y, 0);
  out.second = integrate_nd(
      std::span<const QuadraturePoints>(axes),
      [&](std::span<const double> x) {
        const double v = bench.y(x);
        return v * v;
      },
      0);
  return out;
}

std::string report_csv_header() { return "case,method,p,h,elements,knot_variant,error,published_value"; }

std::string report_csv_row(const ErrorReport& r) {
  const std::string h = r.config.h_label.empty() ? fmt::format("{}", r.h) : r.config.h_label;
  const std::string published = r.config.published_value ? fmt::format("{}", *r.config.published_value) : "";
  return fmt::format("{},{},{},{},{},{},{:.16e},{}", r.case_name, to_string(r.config.method), r.config.degree, h,
                     r.config.method == Method::pce ? 1 : r.config.elements, to_string(r.config.variant), r.error,
                     published);
}

}  // namespace sce
