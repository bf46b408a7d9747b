#include "sce/tensor_sce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sce/error.hpp"
#include "text_util.hpp"

namespace sce {

namespace {

void check_dimension(std::size_t n) {
  if (n == 0 || n > max_dimension) {
    throw Error(ErrorKind::dimension_limit, fmt::format("{} dimensions requested, supported 1..{}", n, max_dimension));
  }
}

std::vector<int> axis_counts(std::span<const UnivariateOrthoBasis> axes) {
  std::vector<int> counts;
  counts.reserve(axes.size());
  for (const auto& a : axes) counts.push_back(a.size());
  return counts;
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiIndexSet

MultiIndexSet::MultiIndexSet(std::vector<int> counts) : counts_(std::move(counts)), strides_(counts_.size()) {
  for (int c : counts_) {
    if (c < 1) throw Error(ErrorKind::invalid_argument, fmt::format("axis with {} basis functions", c));
  }
  for (std::size_t k = counts_.size(); k-- > 0;) {
    strides_[k] = size_;
    size_ *= static_cast<std::size_t>(counts_[k]);
  }
}

std::size_t MultiIndexSet::linear(std::span<const int> index) const {
  if (index.size() != counts_.size()) {
    throw Error(ErrorKind::index_out_of_range, fmt::format("{}-index for {} dimensions", index.size(), counts_.size()));
  }
  std::size_t l = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    if (index[k] < 0 || index[k] >= counts_[k]) {
      throw Error(ErrorKind::index_out_of_range, fmt::format("index {} on axis {} outside [0, {})", index[k], k, counts_[k]));
    }
    l += static_cast<std::size_t>(index[k]) * strides_[k];
  }
  return l;
}

std::vector<int> MultiIndexSet::multi(std::size_t linear) const {
  if (linear >= size_) throw Error(ErrorKind::index_out_of_range, fmt::format("linear index {} >= {}", linear, size_));
  std::vector<int> index(counts_.size());
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    index[k] = static_cast<int>(linear / strides_[k]);
    linear %= strides_[k];
  }
  return index;
}

// ---------------------------------------------------------------------------
// TensorBasis

TensorBasis::TensorBasis(std::vector<UnivariateOrthoBasis> axes)
    : axes_((check_dimension(axes.size()), std::move(axes))), indices_(axis_counts(axes_)) {}

TensorBasis TensorBasis::build(std::span<const KnotSequence> knots, std::span<const ProbabilityMeasure> measures) {
  if (knots.size() != measures.size()) {
    throw Error(ErrorKind::invalid_argument, fmt::format("{} knot sequences for {} measures", knots.size(), measures.size()));
  }
  check_dimension(knots.size());
  std::vector<UnivariateOrthoBasis> axes;
  axes.reserve(knots.size());
  for (std::size_t k = 0; k < knots.size(); ++k) axes.emplace_back(BsplineBasis(knots[k]), measures[k]);
  return TensorBasis(std::move(axes));
}

double TensorBasis::eval(std::span<const int> index, std::span<const double> x) const {
  if (x.size() != axes_.size()) {
    throw Error(ErrorKind::invalid_argument, fmt::format("{}-point for {} dimensions", x.size(), axes_.size()));
  }
  (void)indices_.linear(index);  // range check
  double v = 1.0;
  for (std::size_t k = 0; k < axes_.size(); ++k) v *= axes_[k].eval(x[k])[static_cast<std::size_t>(index[k])];
  return v;
}

// ---------------------------------------------------------------------------
// Tensor helpers

void apply_along_axis(std::vector<double>& tensor, std::span<const int> dims, std::size_t axis, const Matrix& m) {
  std::size_t outer = 1;
  std::size_t inner = 1;
  for (std::size_t k = 0; k < axis; ++k) outer *= static_cast<std::size_t>(dims[k]);
  for (std::size_t k = axis + 1; k < dims.size(); ++k) inner *= static_cast<std::size_t>(dims[k]);
  const auto n = static_cast<std::size_t>(dims[axis]);
  std::vector<double> column(n);
  std::vector<double> result(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      for (std::size_t b = 0; b < n; ++b) column[b] = tensor[(o * n + b) * inner + i];
      for (std::size_t a = 0; a < n; ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b < n; ++b) s += m(a, b) * column[b];
        result[a] = s;
      }
      for (std::size_t a = 0; a < n; ++a) tensor[(o * n + a) * inner + i] = result[a];
    }
  }
}

// ---------------------------------------------------------------------------
// Projection

namespace {

struct AxisGrid {
  QuadraturePoints points;
  std::vector<AuxiliaryTerms> aux;
};

class Projector {
 public:
  Projector(const TensorBasis& basis, const PointFunction& y, const ProjectionOptions& options)
      : basis_(basis), y_(y), dims_(basis.indices().counts().begin(), basis.indices().counts().end()) {
    const std::size_t n = basis.dimension();
    strides_.assign(basis.indices().strides().begin(), basis.indices().strides().end());
    grids_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& axis = basis.axis(k);
      const int order = options.order > 0 ? options.order : std::max(axis.degree() + 1, 10);
      CompositeRule rule = CompositeRule::on_knots(axis.knots(), order, options.subdivisions);
      if (k < options.breakpoints.size()) rule = rule.with_breakpoints(options.breakpoints[k]);
      grids_[k].points = rule.expectation_points(axis.measure());
      grids_[k].aux.reserve(grids_[k].points.nodes.size());
      for (double x : grids_[k].points.nodes) grids_[k].aux.push_back(axis.auxiliary_local(x));
    }
  }

  /// E[y P_{j_1} ... P_{j_N}] for every auxiliary multi-index.
  std::vector<double> auxiliary_moments(unsigned threads) const {
    const std::size_t n = dims_.size();
    const std::size_t total = basis_.size();
    const AxisGrid& outer = grids_[0];
    const std::size_t q_count = outer.points.nodes.size();

    // One contribution tensor per outer node, reduced pairwise afterwards so
    // the result is independent of the worker count.
    std::vector<std::vector<double>> parts(q_count);
    parallel_for(q_count, threads, [&](std::size_t q) {
      std::vector<double> x(n);
      std::vector<std::vector<double>> work(n);
      x[0] = outer.points.nodes[q];
      std::vector<double> part(total, 0.0);
      const double w = outer.points.weights[q];
      if (n == 1) {
        const double v = w * y_(x);
        scatter(outer.aux[q], v, std::span<const double>(), 1, part);
      } else {
        const std::vector<double>& sub = contract(1, x, work);
        scatter(outer.aux[q], w, sub, strides_[0], part);
      }
      parts[q] = std::move(part);
    });
    return reduce(parts, 0, parts.size());
  }

 private:
  // part[j * stride + r] += scale * value_j * sub[r]; with empty `sub`, stride is 1 and sub[r] = 1.
  static void scatter(const AuxiliaryTerms& aux, double scale, std::span<const double> sub, std::size_t stride,
                      std::vector<double>& part) {
    for (std::size_t a = 0; a < aux.index.size(); ++a) {
      const double f = scale * aux.value[a];
      double* dst = part.data() + static_cast<std::size_t>(aux.index[a]) * stride;
      if (sub.empty()) {
        *dst += f;
      } else {
        for (std::size_t r = 0; r < stride; ++r) dst[r] += f * sub[r];
      }
    }
  }

  // Partial integral over axes level..N-1 with x[0..level-1] fixed.
  const std::vector<double>& contract(std::size_t level, std::vector<double>& x,
                                      std::vector<std::vector<double>>& work) const {
    const std::size_t n = dims_.size();
    const AxisGrid& grid = grids_[level];
    std::vector<double>& out = work[level];
    out.assign(static_cast<std::size_t>(dims_[level]) * strides_[level], 0.0);
    for (std::size_t q = 0; q < grid.points.nodes.size(); ++q) {
      x[level] = grid.points.nodes[q];
      const double w = grid.points.weights[q];
      if (level + 1 == n) {
        scatter(grid.aux[q], w * y_(x), std::span<const double>(), 1, out);
      } else {
        const std::vector<double>& sub = contract(level + 1, x, work);
        scatter(grid.aux[q], w, sub, strides_[level], out);
      }
    }
    return out;
  }

  static std::vector<double> reduce(std::vector<std::vector<double>>& parts, std::size_t begin, std::size_t end) {
    if (end - begin == 1) return std::move(parts[begin]);
    const std::size_t mid = begin + (end - begin) / 2;
    std::vector<double> left = reduce(parts, begin, mid);
    const std::vector<double> right = reduce(parts, mid, end);
    for (std::size_t i = 0; i < left.size(); ++i) left[i] += right[i];
    return left;
  }

  const TensorBasis& basis_;
  const PointFunction& y_;
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::vector<AxisGrid> grids_;
};

}  // namespace

SceModel project(const TensorBasis& basis, const PointFunction& y, const ProjectionOptions& options) {
  const Projector projector(basis, y, options);
  std::vector<double> c = projector.auxiliary_moments(options.threads);
  const auto dims = basis.indices().counts();
  for (std::size_t k = 0; k < basis.dimension(); ++k) apply_along_axis(c, dims, k, basis.axis(k).whitening());
  return SceModel(basis, std::move(c));
}

// ---------------------------------------------------------------------------
// SceModel

SceModel::SceModel(TensorBasis basis, std::vector<double> coefficients)
    : basis_(std::move(basis)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != basis_.size()) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("{} coefficients for {} basis functions", coefficients_.size(), basis_.size()));
  }
  auxiliary_coefficients_ = coefficients_;
  const auto dims = basis_.indices().counts();
  for (std::size_t k = 0; k < basis_.dimension(); ++k) {
    apply_along_axis(auxiliary_coefficients_, dims, k, basis_.axis(k).whitening().transposed());
  }
}

double SceModel::coefficient(std::span<const int> index) const {
  return coefficients_[basis_.indices().linear(index)];
}

double SceModel::second_moment() const {
  std::vector<double> squares(coefficients_.size());
  for (std::size_t i = 0; i < squares.size(); ++i) squares[i] = coefficients_[i] * coefficients_[i];
  return pairwise_sum(squares);
}

double SceModel::variance() const {
  std::vector<double> squares(coefficients_.size() - 1);
  for (std::size_t i = 0; i < squares.size(); ++i) squares[i] = coefficients_[i + 1] * coefficients_[i + 1];
  return pairwise_sum(squares);
}

double SceModel::evaluate(std::span<const double> x) const {
  const std::size_t n = basis_.dimension();
  if (x.size() != n) throw Error(ErrorKind::invalid_argument, fmt::format("{}-point for {} dimensions", x.size(), n));
  std::vector<AuxiliaryTerms> aux(n);
  for (std::size_t k = 0; k < n; ++k) aux[k] = basis_.axis(k).auxiliary_local(x[k]);
  const auto strides = basis_.indices().strides();

  // Depth-first over the (p_k + 2)-term local products.
  double total = 0.0;
  std::vector<std::size_t> pos(n, 0);
  std::vector<double> prefix(n + 1, 1.0);
  std::vector<std::size_t> offset(n + 1, 0);
  std::size_t level = 0;
  for (;;) {
    if (pos[level] < aux[level].index.size()) {
      const std::size_t a = pos[level]++;
      prefix[level + 1] = prefix[level] * aux[level].value[a];
      offset[level + 1] = offset[level] + static_cast<std::size_t>(aux[level].index[a]) * strides[level];
      if (level + 1 == n) {
        total += prefix[n] * auxiliary_coefficients_[offset[n]];
      } else {
        ++level;
        pos[level] = 0;
      }
    } else {
      if (level == 0) break;
      --level;
    }
  }
  return total;
}

std::string SceModel::serialize() const {
  std::string s = "sce-model 1\n";
  s += fmt::format("dimension {}\n", basis_.dimension());
  for (std::size_t k = 0; k < basis_.dimension(); ++k) {
    const auto& axis = basis_.axis(k);
    s += fmt::format("measure {}\n", axis.measure().to_string());
    s += fmt::format("knots {}\n", axis.knots().to_string());
  }
  s += fmt::format("coefficients {}\n", coefficients_.size());
  for (double c : coefficients_) s += fmt::format("{:.16e}\n", c);
  return s;
}

SceModel SceModel::deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next = [&](const std::string& key) {
    if (!std::getline(in, line) || line.rfind(key, 0) != 0) {
      throw Error(ErrorKind::config_parse, fmt::format("model file: expected '{}'", key));
    }
    return detail::trim(line.substr(key.size()));
  };
  if (next("sce-model") != "1") throw Error(ErrorKind::config_parse, "model file: unsupported version");
  const long n = detail::parse_integer(next("dimension"));
  check_dimension(static_cast<std::size_t>(std::max(0L, n)));
  std::vector<KnotSequence> knots;
  std::vector<ProbabilityMeasure> measures;
  for (long k = 0; k < n; ++k) {
    measures.push_back(ProbabilityMeasure::parse(next("measure")));
    knots.push_back(KnotSequence::parse(next("knots")));
  }
  const long count = detail::parse_integer(next("coefficients"));
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(std::max(0L, count)));
  for (long i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw Error(ErrorKind::config_parse, "model file: truncated coefficients");
    c.push_back(detail::parse_double(line));
  }
  return SceModel(TensorBasis::build(knots, measures), std::move(c));
}

void SceModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, fmt::format("cannot write {}", path.string()));
  out << serialize();
}

SceModel SceModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, fmt::format("cannot read {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<double> draw_inputs(const TensorBasis& basis, Rng& rng, std::size_t count) {
  const std::size_t n = basis.dimension();
  std::vector<double> x(count * n);
  for (std::size_t s = 0; s < count; ++s)
    for (std::size_t k = 0; k < n; ++k) x[s * n + k] = basis.axis(k).measure().inverse_cdf(uniform01(rng));
  return x;
}

std::vector<double> resample_cdf(const SceModel& model, Rng& rng, std::size_t count) {
  if (count < 1) throw Error(ErrorKind::invalid_argument, "resample count must be positive");
  const std::size_t n = model.basis().dimension();
  const std::vector<double> x = draw_inputs(model.basis(), rng, count);
  std::vector<double> values(count);
  for (std::size_t s = 0; s < count; ++s) values[s] = model.evaluate(std::span<const double>(x).subspan(s * n, n));
  std::sort(values.begin(), values.end());
  return values;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::invalid_argument, "KS distance of an empty sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace sce
