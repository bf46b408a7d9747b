#include "sce/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "sce/error.hpp"

namespace sce {

namespace {

GaussRule compute_gauss_legendre(int order) {
  GaussRule rule;
  rule.order = order;
  const auto n = static_cast<std::size_t>(order);
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi's initial guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    // Re-evaluate the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    if (n == 1) p0 = 1.0;
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorKind::invalid_argument, fmt::format("Gauss order {}", order));
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(compute_gauss_legendre(order));
  return *slot;
}

CompositeRule::CompositeRule(std::vector<double> breakpoints, int order, int subdivisions)
    : breakpoints_(std::move(breakpoints)), order_(order), subdivisions_(subdivisions) {
  if (breakpoints_.size() < 2) throw Error(ErrorKind::invalid_argument, "composite rule needs two breakpoints");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) {
      throw Error(ErrorKind::knots_not_increasing, "composite rule breakpoints must increase");
    }
  }
  if (order_ < 1 || subdivisions_ < 1) {
    throw Error(ErrorKind::invalid_argument, fmt::format("order {} / subdivisions {}", order_, subdivisions_));
  }
}

CompositeRule CompositeRule::on_knots(const KnotSequence& knots, int order, int subdivisions) {
  const auto d = knots.distinct();
  return CompositeRule(std::vector<double>(d.begin(), d.end()), order, subdivisions);
}

CompositeRule CompositeRule::with_breakpoints(std::span<const double> extra) const {
  std::vector<double> merged = breakpoints_;
  for (double x : extra) {
    if (x > lower() && x < upper()) merged.push_back(x);
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return CompositeRule(std::move(merged), order_, subdivisions_);
}

QuadraturePoints CompositeRule::points() const {
  const GaussRule& g = gauss_legendre(order_);
  QuadraturePoints out;
  const std::size_t total = (breakpoints_.size() - 1) * static_cast<std::size_t>(subdivisions_ * order_);
  out.nodes.reserve(total);
  out.weights.reserve(total);
  for (std::size_t c = 0; c + 1 < breakpoints_.size(); ++c) {
    const double a = breakpoints_[c];
    const double b = breakpoints_[c + 1];
    for (int s = 0; s < subdivisions_; ++s) {
      const double lo = s == 0 ? a : a + (b - a) * s / subdivisions_;
      const double hi = s + 1 == subdivisions_ ? b : a + (b - a) * (s + 1) / subdivisions_;
      const double half = 0.5 * (hi - lo);
      const double mid = 0.5 * (hi + lo);
      for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        out.nodes.push_back(mid + half * g.nodes[q]);
        out.weights.push_back(half * g.weights[q]);
      }
    }
  }
  return out;
}

QuadraturePoints CompositeRule::expectation_points(const ProbabilityMeasure& measure) const {
  if (measure.lower() != lower() || measure.upper() != upper()) {
    throw Error(ErrorKind::support_mismatch,
                fmt::format("rule on [{}, {}] but measure on [{}, {}]", lower(), upper(), measure.lower(),
                            measure.upper()));
  }
  QuadraturePoints pts = with_breakpoints(measure.breakpoints()).points();
  for (std::size_t q = 0; q < pts.nodes.size(); ++q) pts.weights[q] *= measure.density(pts.nodes[q]);
  return pts;
}

double pairwise_sum(std::span<const double> terms) {
  if (terms.size() <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

double integrate_1d(const CompositeRule& rule, const std::function<double(double)>& f) {
  const QuadraturePoints pts = rule.points();
  std::vector<double> terms(pts.nodes.size());
  for (std::size_t q = 0; q < terms.size(); ++q) terms[q] = pts.weights[q] * f(pts.nodes[q]);
  return pairwise_sum(terms);
}

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

void check_dimension(std::size_t n) {
  if (n == 0 || n > max_dimension) {
    throw Error(ErrorKind::dimension_limit, fmt::format("{} dimensions requested, supported 1..{}", n, max_dimension));
  }
}

double integrate_level(std::span<const QuadraturePoints> axes, std::size_t level, std::vector<double>& x,
                       const PointFunction& f) {
  const QuadraturePoints& ax = axes[level];
  std::vector<double> terms(ax.nodes.size());
  for (std::size_t q = 0; q < ax.nodes.size(); ++q) {
    x[level] = ax.nodes[q];
    const double inner = level + 1 == axes.size() ? f(x) : integrate_level(axes, level + 1, x, f);
    terms[q] = ax.weights[q] * inner;
  }
  return pairwise_sum(terms);
}

void sweep_level(std::span<const QuadraturePoints> axes, std::size_t level, std::vector<double>& x, double weight,
                 const std::function<void(std::span<const double>, double)>& visit) {
  const QuadraturePoints& ax = axes[level];
  for (std::size_t q = 0; q < ax.nodes.size(); ++q) {
    x[level] = ax.nodes[q];
    const double w = weight * ax.weights[q];
    if (level + 1 == axes.size()) {
      visit(x, w);
    } else {
      sweep_level(axes, level + 1, x, w, visit);
    }
  }
}

}  // namespace

double integrate_nd(std::span<const QuadraturePoints> axes, const PointFunction& f, unsigned threads) {
  check_dimension(axes.size());
  const QuadraturePoints& outer = axes[0];
  std::vector<double> terms(outer.nodes.size());
  parallel_for(outer.nodes.size(), threads, [&](std::size_t q) {
    std::vector<double> x(axes.size());
    x[0] = outer.nodes[q];
    const double inner = axes.size() == 1 ? f(x) : integrate_level(axes, 1, x, f);
    terms[q] = outer.weights[q] * inner;
  });
  return pairwise_sum(terms);
}

double integrate_nd(std::span<const CompositeRule> rules, const PointFunction& f, unsigned threads) {
  check_dimension(rules.size());
  std::vector<QuadraturePoints> axes;
  axes.reserve(rules.size());
  for (const auto& r : rules) axes.push_back(r.points());
  return integrate_nd(std::span<const QuadraturePoints>(axes), f, threads);
}

void sweep_nd(std::span<const QuadraturePoints> axes,
              const std::function<void(std::span<const double>, double)>& visit) {
  check_dimension(axes.size());
  std::vector<double> x(axes.size());
  sweep_level(axes, 0, x, 1.0, visit);
}

}  // namespace sce
