#include "sce/measure.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include <fmt/format.h>

#include "sce/error.hpp"
#include "sce/quadrature.hpp"
#include "text_util.hpp"

namespace sce {

ProbabilityMeasure ProbabilityMeasure::uniform(double lower, double upper) {
  if (!(std::isfinite(lower) && std::isfinite(upper)) || !(upper > lower)) {
    throw Error(ErrorKind::invalid_interval, fmt::format("uniform({}, {})", lower, upper));
  }
  ProbabilityMeasure m;
  m.kind_ = Kind::uniform;
  m.lower_ = lower;
  m.upper_ = upper;
  return m;
}

ProbabilityMeasure ProbabilityMeasure::tabulated(std::vector<double> x, std::vector<double> f) {
  if (x.size() < 2 || x.size() != f.size()) {
    throw Error(ErrorKind::invalid_argument, "tabulated density needs at least two (x, f) pairs");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(f[i])) {
      throw Error(ErrorKind::invalid_argument, "tabulated density has non-finite entries");
    }
    if (f[i] < 0.0) {
      throw Error(ErrorKind::invalid_argument, fmt::format("negative density {} at x = {}", f[i], x[i]));
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw Error(ErrorKind::invalid_interval, "tabulated grid must be strictly increasing");
    }
  }

  // Trapezoid sums are exact for a piecewise-linear density.
  double mass = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) mass += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
  if (!(mass > 0.0)) throw Error(ErrorKind::invalid_argument, "tabulated density has zero mass");
  if (std::abs(mass - 1.0) > 1e-6) {
    std::cerr << fmt::format("warning: tabulated density integrates to {:.10g}; renormalizing\n", mass);
  }
  for (double& v : f) v /= mass;

  ProbabilityMeasure m;
  m.kind_ = Kind::tabulated;
  m.lower_ = x.front();
  m.upper_ = x.back();
  m.cumulative_.assign(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    m.cumulative_[i] = m.cumulative_[i - 1] + 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
  }
  m.interior_.assign(x.begin() + 1, x.end() - 1);
  m.grid_ = std::move(x);
  m.values_ = std::move(f);

  // Mass check through an independent Gauss sum over each linear piece.
  const GaussRule& rule = gauss_legendre(1);
  double total = 0.0;
  for (std::size_t i = 1; i < m.grid_.size(); ++i) {
    const double half = 0.5 * (m.grid_[i] - m.grid_[i - 1]);
    const double mid = 0.5 * (m.grid_[i] + m.grid_[i - 1]);
    total += half * rule.weights[0] * m.density(mid + half * rule.nodes[0]);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_argument, fmt::format("density mass {} after renormalization", total));
  }
  return m;
}

double ProbabilityMeasure::density(double x) const {
  if (x < lower_ || x > upper_) return 0.0;
  if (kind_ == Kind::uniform) return 1.0 / (upper_ - lower_);
  auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - grid_.begin());
  if (i >= grid_.size()) return values_.back();
  const double t = (x - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
  return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

double ProbabilityMeasure::cdf(double x) const {
  if (x <= lower_) return 0.0;
  if (x >= upper_) return 1.0;
  if (kind_ == Kind::uniform) return (x - lower_) / (upper_ - lower_);
  auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  const double t = x - grid_[i];
  const double slope = (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
  return cumulative_[i] + values_[i] * t + 0.5 * slope * t * t;
}

double ProbabilityMeasure::inverse_cdf(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw Error(ErrorKind::out_of_domain, fmt::format("probability {} outside [0, 1]", u));
  }
  if (kind_ == Kind::uniform) return lower_ + u * (upper_ - lower_);
  if (u <= 0.0) return lower_;
  if (u >= 1.0) return upper_;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  if (i >= cumulative_.size()) return upper_;
  --i;
  const double need = u - cumulative_[i];
  const double f0 = values_[i];
  const double slope = (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
  // Root of slope/2 t^2 + f0 t - need = 0 in the cancellation-free form.
  const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * need);
  const double denom = f0 + std::sqrt(disc);
  const double t = denom > 0.0 ? 2.0 * need / denom : 0.0;
  return std::clamp(grid_[i] + t, grid_[i], grid_[i + 1]);
}

double ProbabilityMeasure::raw_moment(unsigned l) const {
  if (l == 0) return 1.0;
  if (kind_ == Kind::uniform) {
    const double n = static_cast<double>(l) + 1.0;
    return (std::pow(upper_, n) - std::pow(lower_, n)) / (n * (upper_ - lower_));
  }
  // x^l times a linear density has degree l + 1.
  const GaussRule& rule = gauss_legendre(static_cast<int>(l / 2 + 1));
  double sum = 0.0;
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    const double half = 0.5 * (grid_[i] - grid_[i - 1]);
    const double mid = 0.5 * (grid_[i] + grid_[i - 1]);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = mid + half * rule.nodes[q];
      sum += half * rule.weights[q] * std::pow(x, static_cast<double>(l)) * density(x);
    }
  }
  return sum;
}

std::span<const double> ProbabilityMeasure::breakpoints() const noexcept { return interior_; }

std::vector<double> ProbabilityMeasure::sample(Rng& rng, std::size_t count) const {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(inverse_cdf(uniform01(rng)));
  return out;
}

std::string ProbabilityMeasure::to_string() const {
  if (kind_ == Kind::uniform) return fmt::format("uniform({},{})", lower_, upper_);
  std::string s = "tabulated(";
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (i > 0) s += ", ";
    s += fmt::format("{}:{}", grid_[i], values_[i]);
  }
  return s + ")";
}

ProbabilityMeasure ProbabilityMeasure::parse(const std::string& text) {
  const std::string s = detail::trim(text);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') {
    throw Error(ErrorKind::config_parse, fmt::format("measure '{}' is not of the form name(args)", text));
  }
  const std::string name = detail::trim(s.substr(0, open));
  const std::string args = s.substr(open + 1, s.size() - open - 2);
  if (name == "uniform") {
    const auto parts = detail::split(args, ',');
    if (parts.size() != 2) throw Error(ErrorKind::config_parse, "uniform(a,b) takes two arguments");
    return uniform(detail::parse_double(parts[0]), detail::parse_double(parts[1]));
  }
  if (name == "tabulated") {
    std::vector<double> x;
    std::vector<double> f;
    for (const auto& pair : detail::split(args, ',')) {
      const auto xf = detail::split(pair, ':');
      if (xf.size() != 2) throw Error(ErrorKind::config_parse, fmt::format("bad density point '{}'", pair));
      x.push_back(detail::parse_double(xf[0]));
      f.push_back(detail::parse_double(xf[1]));
    }
    return tabulated(std::move(x), std::move(f));
  }
  throw Error(ErrorKind::config_parse, fmt::format("unknown measure '{}'", name));
}

}  // namespace sce
