#include "sce/bspline.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sce/error.hpp"

namespace sce {

BsplineBasis::BsplineBasis(KnotSequence knots) : knots_(std::move(knots)), xi_(knots_.expanded()) {
  const int p = knots_.degree();
  const int n = knots_.basis_count();
  // Last nonempty span: the largest j < n with xi_j < xi_{j+1}.
  last_span_ = n - 1;
  while (last_span_ > p && !(xi_[static_cast<std::size_t>(last_span_)] < xi_[static_cast<std::size_t>(last_span_) + 1])) {
    --last_span_;
  }
}

void BsplineBasis::check_domain(double x) const {
  if (!(x >= lower() && x <= upper())) {
    throw Error(ErrorKind::out_of_domain, fmt::format("x = {} outside [{}, {}]", x, lower(), upper()));
  }
}

int BsplineBasis::find_span(double x) const {
  check_domain(x);
  if (x >= upper()) return last_span_;
  const int p = degree();
  const int n = size();
  // First knot strictly greater than x, searched among xi_{p+1} .. xi_n.
  auto begin = xi_.begin() + p + 1;
  auto end = xi_.begin() + n + 1;
  auto it = std::upper_bound(begin, end, x);
  return static_cast<int>(it - xi_.begin()) - 1;
}

LocalBasis BsplineBasis::eval_piece(int span, double x) const {
  const int p = degree();
  const auto j = static_cast<std::size_t>(span);
  LocalBasis out;
  out.first = span - p;
  out.values.assign(static_cast<std::size_t>(p) + 1, 0.0);
  std::vector<double> left(static_cast<std::size_t>(p) + 1);
  std::vector<double> right(static_cast<std::size_t>(p) + 1);
  auto& N = out.values;
  N[0] = 1.0;
  // Triangular Cox-de Boor table; the denominators xi_{j+r} - xi_{j+r-k} are
  // positive on a nonempty span, so the 0/0 terms of the full recursion never arise.
  for (std::size_t k = 1; k <= static_cast<std::size_t>(p); ++k) {
    left[k] = x - xi_[j + 1 - k];
    right[k] = xi_[j + k] - x;
    double saved = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
      const double temp = N[r] / (right[r + 1] + left[k - r]);
      N[r] = saved + right[r + 1] * temp;
      saved = left[k - r] * temp;
    }
    N[k] = saved;
  }
  return out;
}

LocalBasis BsplineBasis::eval_local(double x) const { return eval_piece(find_span(x), x); }

std::vector<double> BsplineBasis::eval_all(double x) const {
  std::vector<double> all(static_cast<std::size_t>(size()), 0.0);
  const LocalBasis local = eval_local(x);
  std::copy(local.values.begin(), local.values.end(), all.begin() + local.first);
  return all;
}

double BsplineBasis::eval_single(int i, double x) const {
  if (i < 0 || i >= size()) {
    throw Error(ErrorKind::index_out_of_range, fmt::format("basis index {} outside [0, {})", i, size()));
  }
  const LocalBasis local = eval_local(x);
  const int r = i - local.first;
  if (r < 0 || r > degree()) return 0.0;
  return local.values[static_cast<std::size_t>(r)];
}

int BsplineBasis::smoothness_at(int knot_index) const {
  const auto mult = knots_.multiplicities();
  if (knot_index < 1 || knot_index + 1 >= static_cast<int>(mult.size())) {
    throw Error(ErrorKind::index_out_of_range,
                fmt::format("interior knot index {} outside [1, {}]", knot_index, static_cast<int>(mult.size()) - 2));
  }
  return degree() - mult[static_cast<std::size_t>(knot_index)];
}

}  // namespace sce
