#include "sce/knots.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sce/error.hpp"
#include "text_util.hpp"

namespace sce {

KnotSequence::KnotSequence(int degree, std::vector<double> distinct, std::vector<int> multiplicities)
    : degree_(degree), distinct_(std::move(distinct)), multiplicities_(std::move(multiplicities)) {
  if (degree_ < 0) throw Error(ErrorKind::invalid_argument, fmt::format("negative degree {}", degree_));
  if (distinct_.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "a knot sequence needs at least two distinct knots");
  }
  if (multiplicities_.size() != distinct_.size()) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("{} multiplicities given for {} distinct knots", multiplicities_.size(), distinct_.size()));
  }
  for (std::size_t i = 0; i < distinct_.size(); ++i) {
    if (!std::isfinite(distinct_[i])) throw Error(ErrorKind::invalid_argument, "non-finite knot");
    if (i > 0 && !(distinct_[i] > distinct_[i - 1])) {
      throw Error(ErrorKind::knots_not_increasing,
                  fmt::format("knot {} follows {}", distinct_[i], distinct_[i - 1]));
    }
  }
  const int ends = degree_ + 1;
  if (multiplicities_.front() != ends || multiplicities_.back() != ends) {
    throw Error(ErrorKind::multiplicity_out_of_range,
                fmt::format("end knots of a degree-{} open sequence need multiplicity {}", degree_, ends));
  }
  int interior = 0;
  for (std::size_t i = 1; i + 1 < multiplicities_.size(); ++i) {
    const int m = multiplicities_[i];
    if (m < 1 || m > degree_ + 1) {
      throw Error(ErrorKind::multiplicity_out_of_range,
                  fmt::format("multiplicity {} at knot {} outside [1, {}]", m, distinct_[i], degree_ + 1));
    }
    interior += m;
  }
  basis_count_ = interior + degree_ + 1;

  expanded_.reserve(static_cast<std::size_t>(basis_count_ + degree_ + 1));
  for (std::size_t i = 0; i < distinct_.size(); ++i) {
    expanded_.insert(expanded_.end(), static_cast<std::size_t>(multiplicities_[i]), distinct_[i]);
  }
}

KnotSequence KnotSequence::open_uniform(int degree, double lower, double upper, int elements) {
  if (elements < 1) throw Error(ErrorKind::invalid_argument, fmt::format("{} elements requested", elements));
  if (!(upper > lower)) throw Error(ErrorKind::invalid_interval, fmt::format("[{}, {}]", lower, upper));
  std::vector<double> distinct(static_cast<std::size_t>(elements) + 1);
  for (int i = 0; i <= elements; ++i) {
    distinct[static_cast<std::size_t>(i)] = lower + (upper - lower) * i / elements;
  }
  distinct.back() = upper;
  std::vector<int> mult(distinct.size(), 1);
  mult.front() = mult.back() = degree + 1;
  return KnotSequence(degree, std::move(distinct), std::move(mult));
}

KnotSequence KnotSequence::open_with_multiplicities(int degree, std::vector<double> distinct,
                                                    std::vector<int> interior_multiplicities) {
  if (distinct.size() < 2 || interior_multiplicities.size() != distinct.size() - 2) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("{} interior multiplicities for {} distinct knots", interior_multiplicities.size(),
                            distinct.size()));
  }
  std::vector<int> mult;
  mult.reserve(distinct.size());
  mult.push_back(degree + 1);
  mult.insert(mult.end(), interior_multiplicities.begin(), interior_multiplicities.end());
  mult.push_back(degree + 1);
  return KnotSequence(degree, std::move(distinct), std::move(mult));
}

KnotSequence KnotSequence::from_expanded(int degree, std::span<const double> expanded) {
  std::vector<double> distinct;
  std::vector<int> mult;
  for (double x : expanded) {
    if (!distinct.empty() && x == distinct.back()) {
      ++mult.back();
    } else {
      if (!distinct.empty() && x < distinct.back()) {
        throw Error(ErrorKind::knots_not_increasing, "expanded knot vector is decreasing");
      }
      distinct.push_back(x);
      mult.push_back(1);
    }
  }
  return KnotSequence(degree, std::move(distinct), std::move(mult));
}

std::vector<Element> KnotSequence::elements() const {
  std::vector<Element> out;
  out.reserve(distinct_.size() - 1);
  for (std::size_t i = 0; i + 1 < distinct_.size(); ++i) out.push_back({distinct_[i], distinct_[i + 1]});
  return out;
}

double KnotSequence::max_element_size() const noexcept {
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < distinct_.size(); ++i) h = std::max(h, distinct_[i + 1] - distinct_[i]);
  return h;
}

KnotSequence KnotSequence::with_knot(double knot, int multiplicity) const {
  if (!(knot > lower() && knot < upper())) {
    throw Error(ErrorKind::out_of_domain, fmt::format("knot {} is not interior to [{}, {}]", knot, lower(), upper()));
  }
  std::vector<double> distinct = distinct_;
  std::vector<int> mult = multiplicities_;
  auto it = std::lower_bound(distinct.begin(), distinct.end(), knot);
  const auto pos = it - distinct.begin();
  if (*it == knot) {
    mult[static_cast<std::size_t>(pos)] = multiplicity;
  } else {
    distinct.insert(it, knot);
    mult.insert(mult.begin() + pos, multiplicity);
  }
  return KnotSequence(degree_, std::move(distinct), std::move(mult));
}

std::string KnotSequence::to_string() const {
  std::string s = fmt::format("{};", degree_);
  for (std::size_t i = 0; i < distinct_.size(); ++i) {
    s += fmt::format("{} {}^{}", i == 0 ? "" : ",", distinct_[i], multiplicities_[i]);
  }
  return s;
}

KnotSequence KnotSequence::parse(const std::string& text) {
  const auto semi = text.find(';');
  if (semi == std::string::npos) {
    throw Error(ErrorKind::config_parse, fmt::format("knot spec '{}' lacks 'p;' prefix", text));
  }
  const long degree = detail::parse_integer(text.substr(0, semi));
  std::vector<double> distinct;
  std::vector<int> mult;
  const auto items = detail::split(text.substr(semi + 1), ',');
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto caret = items[i].find('^');
    distinct.push_back(detail::parse_double(items[i].substr(0, caret)));
    if (caret != std::string::npos) {
      mult.push_back(static_cast<int>(detail::parse_integer(items[i].substr(caret + 1))));
    } else {
      // bare end knots are taken as fully repeated
      mult.push_back(i == 0 || i + 1 == items.size() ? static_cast<int>(degree) + 1 : 1);
    }
  }
  return KnotSequence(static_cast<int>(degree), std::move(distinct), std::move(mult));
}

}  // namespace sce
