#include "sce/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "sce/bench.hpp"
#include "sce/error.hpp"
#include "sce/expr.hpp"
#include "sce/pce.hpp"
#include "text_util.hpp"

namespace sce {

namespace {

struct ProblemFlags {
  std::string builtin;
  std::string expr;
  std::vector<std::string> measures;
  std::vector<int> degrees;
  std::vector<int> elements;
  std::vector<std::string> knots;
  bool repeat_center = false;
  int quad_order = 0;
  int subdivisions = 0;
  unsigned threads = 0;
};

struct Problem {
  PointFunction y;
  std::vector<ProbabilityMeasure> measures;
  std::vector<KnotSequence> knots;
  ProjectionOptions options;
  std::optional<BenchmarkCase> builtin;
};

void add_problem_flags(CLI::App& cmd, ProblemFlags& f) {
  cmd.add_option("--builtin", f.builtin, "Benchmark problem: oscillatory, nonsmooth, near-discontinuous, ode, sobol4");
  cmd.add_option("--expr", f.expr, "Output function of x1..x6 (see docs/expr.md)");
  cmd.add_option("--measure", f.measures, "Input measure per dimension, e.g. uniform(-1,1)")->take_all();
  cmd.add_option("--p", f.degrees, "Spline degree (one value for all dimensions, or one per dimension)")->take_all();
  cmd.add_option("--elements", f.elements, "Equal elements per dimension (default 1, i.e. PCE)")->take_all();
  cmd.add_option("--knots", f.knots, "Knot sequence per dimension: 'p; z1^m1, z2^m2, ...'")->take_all();
  cmd.add_flag("--repeat-center", f.repeat_center, "Raise the knot at the domain center to multiplicity p");
  cmd.add_option("--quad-order", f.quad_order, "Gauss points per quadrature cell (default max(p+1, 10))");
  cmd.add_option("--subdivisions", f.subdivisions, "Quadrature subdivisions per element");
  cmd.add_option("--threads", f.threads, "Worker threads for projection (0 = all cores)");
}

template <class T>
std::vector<T> broadcast(const std::vector<T>& values, std::size_t n, const char* flag) {
  if (values.size() == 1) return std::vector<T>(n, values.front());
  if (values.size() == n) return values;
  throw Error(ErrorKind::config_parse, fmt::format("{} takes 1 or {} values, got {}", flag, n, values.size()));
}

Problem resolve(const ProblemFlags& f) {
  if (f.builtin.empty() == f.expr.empty()) {
    throw Error(ErrorKind::config_parse, "give exactly one of --builtin or --expr");
  }
  Problem pr;
  std::size_t n = 0;
  if (!f.builtin.empty()) {
    pr.builtin = case_by_name(f.builtin);
    pr.y = pr.builtin->y;
    n = pr.builtin->dimension();
    if (!f.measures.empty()) {
      if (f.measures.size() != n) {
        throw Error(ErrorKind::config_parse, fmt::format("builtin '{}' has {} inputs, {} measures given", f.builtin, n,
                                                         f.measures.size()));
      }
      for (const auto& m : f.measures) pr.measures.push_back(ProbabilityMeasure::parse(m));
    } else {
      pr.measures = pr.builtin->measures;
    }
    pr.options.breakpoints.assign(n, pr.builtin->kinks);
  } else {
    const Expression expr = Expression::parse(f.expr);
    n = f.measures.size();
    if (n > max_dimension) {
      throw Error(ErrorKind::dimension_limit, fmt::format("{} dimensions requested, supported 1..{}", n, max_dimension));
    }
    if (static_cast<std::size_t>(expr.arity()) > n) {
      throw Error(ErrorKind::config_parse, fmt::format("expression uses x{} but no --measure was given for dimension {}",
                                                       expr.arity(), n + 1));
    }
    if (n == 0) throw Error(ErrorKind::config_parse, "at least one --measure is required");
    for (const auto& m : f.measures) pr.measures.push_back(ProbabilityMeasure::parse(m));
    pr.y = [expr](std::span<const double> x) { return expr(x); };
  }

  if (!f.knots.empty()) {
    if (!f.elements.empty()) throw Error(ErrorKind::config_parse, "--knots and --elements are exclusive");
    for (const auto& k : broadcast(f.knots, n, "--knots")) pr.knots.push_back(KnotSequence::parse(k));
    if (!f.degrees.empty()) {
      const auto p = broadcast(f.degrees, n, "--p");
      for (std::size_t k = 0; k < n; ++k) {
        if (pr.knots[k].degree() != p[k]) {
          throw Error(ErrorKind::config_parse, fmt::format("--p {} disagrees with knot degree {} on dimension {}", p[k],
                                                           pr.knots[k].degree(), k + 1));
        }
      }
    }
  } else {
    if (f.degrees.empty()) throw Error(ErrorKind::config_parse, "--p is required unless --knots is given");
    const auto p = broadcast(f.degrees, n, "--p");
    const auto e = f.elements.empty() ? std::vector<int>(n, 1) : broadcast(f.elements, n, "--elements");
    for (std::size_t k = 0; k < n; ++k) {
      pr.knots.push_back(KnotSequence::open_uniform(p[k], pr.measures[k].lower(), pr.measures[k].upper(), e[k]));
    }
  }
  if (f.repeat_center) {
    for (auto& k : pr.knots) k = k.with_knot(0.5 * (k.lower() + k.upper()), std::max(1, k.degree()));
  }

  pr.options.order = f.quad_order;
  if (f.subdivisions > 0) {
    pr.options.subdivisions = f.subdivisions;
  } else if (pr.builtin && n == 1) {
    pr.options.subdivisions = 8;
  }
  pr.options.threads = f.threads;
  return pr;
}

SceModel fit_problem(const Problem& pr) {
  return project(TensorBasis::build(pr.knots, pr.measures), pr.y, pr.options);
}

/// Writes to a file, or to `out` when the path is "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out) {
    if (path == "-") {
      stream_ = &out;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorKind::io, fmt::format("cannot write {}", path));
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::string sci(double v) { return fmt::format("{:.16e}", v); }

void dump_gram(const TensorBasis& basis, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, fmt::format("cannot write {}", path));
  f << "axis,matrix,row,col,value\n";
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    const auto& axis = basis.axis(k);
    for (const auto& [name, m] : {std::pair<const char*, const Matrix*>{"G", &axis.gram().entries},
                                  std::pair<const char*, const Matrix*>{"W", &axis.whitening()}}) {
      for (std::size_t i = 0; i < m->rows(); ++i)
        for (std::size_t j = 0; j < m->cols(); ++j) f << fmt::format("{},{},{},{},{}\n", k + 1, name, i, j, sci((*m)(i, j)));
    }
  }
}

int cmd_fit(const ProblemFlags& flags, const std::string& out_path, const std::string& gram_path, std::ostream& out) {
  const Problem pr = resolve(flags);
  const SceModel model = fit_problem(pr);
  if (!gram_path.empty()) dump_gram(model.basis(), gram_path);
  if (!out_path.empty()) model.save(out_path);
  out << fmt::format("dimension {}\n", model.basis().dimension());
  for (std::size_t k = 0; k < model.basis().dimension(); ++k) {
    out << fmt::format("knots{} {}\n", k + 1, model.basis().axis(k).knots().to_string());
  }
  out << fmt::format("coefficients {}\n", model.coefficients().size());
  out << fmt::format("mean {}\n", sci(model.mean()));
  out << fmt::format("variance {}\n", sci(model.variance()));
  if (pr.builtin) {
    const double ref = pr.builtin->reference_variance;
    out << fmt::format("reference_mean {}\n", sci(pr.builtin->reference_mean));
    out << fmt::format("reference_variance {}\n", sci(ref));
    out << fmt::format("relative_variance_error {}\n", sci(std::abs(ref - model.variance()) / ref));
  }
  if (!out_path.empty()) out << fmt::format("model {}\n", out_path);
  return exit_success;
}

int cmd_table1(const std::string& dir, std::ostream& out) {
  std::filesystem::create_directories(dir);
  const std::pair<const char*, BenchmarkCase> tables[] = {
      {"table1a.csv", case_oscillatory()}, {"table1b.csv", case_nonsmooth()}, {"table1c.csv", case_near_discontinuous()}};
  for (const auto& [file, bench] : tables) {
    const auto path = std::filesystem::path(dir) / file;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::io, fmt::format("cannot write {}", path.string()));
    f << report_csv_header() << '\n';
    for (const auto& config : bench.configs) f << report_csv_row(run_case(bench, config)) << '\n';
    out << fmt::format("wrote {}\n", path.string());
  }
  return exit_success;
}

int cmd_bench(const std::string& name, const std::string& out_path, std::ostream& out) {
  const BenchmarkCase bench = case_by_name(name);
  Sink sink(out_path, out);
  *sink << report_csv_header() << '\n';
  for (const auto& config : bench.configs) *sink << report_csv_row(run_case(bench, config)) << '\n';
  return exit_success;
}

int cmd_curve(const ProblemFlags& flags, int grid_points, const std::string& out_path, std::ostream& out) {
  const Problem pr = resolve(flags);
  const std::size_t n = pr.measures.size();
  if (n > 2) throw Error(ErrorKind::dimension_limit, fmt::format("curve supports N <= 2, got {}", n));
  const int g = grid_points > 0 ? grid_points : (n == 1 ? 1001 : 201);
  if (g < 2) throw Error(ErrorKind::config_parse, "--grid-points must be at least 2");
  const SceModel model = fit_problem(pr);
  auto coord = [&](std::size_t k, int i) {
    const auto& m = pr.measures[k];
    return i == g - 1 ? m.upper() : m.lower() + (m.upper() - m.lower()) * i / (g - 1);
  };
  Sink sink(out_path, out);
  if (n == 1) {
    *sink << "x,y,yhat\n";
    for (int i = 0; i < g; ++i) {
      const double x[1] = {coord(0, i)};
      *sink << fmt::format("{},{},{}\n", sci(x[0]), sci(pr.y(x)), sci(model.evaluate(x)));
    }
  } else {
    *sink << "x1,x2,y,yhat\n";
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const double x[2] = {coord(0, i), coord(1, j)};
        *sink << fmt::format("{},{},{},{}\n", sci(x[0]), sci(x[1]), sci(pr.y(x)), sci(model.evaluate(x)));
      }
  }
  return exit_success;
}

int cmd_cdf(const ProblemFlags& flags, long count, std::uint64_t seed, bool mcs, const std::string& out_path,
            std::ostream& out) {
  if (count < 1) throw Error(ErrorKind::config_parse, "--count must be at least 1");
  const Problem pr = resolve(flags);
  const SceModel model = fit_problem(pr);
  const std::size_t n = pr.measures.size();
  const auto total = static_cast<std::size_t>(count);
  Rng rng(seed);
  const std::vector<double> x = draw_inputs(model.basis(), rng, total);
  std::vector<double> surrogate(total);
  std::vector<double> crude(mcs ? total : 0);
  for (std::size_t s = 0; s < total; ++s) {
    const auto point = std::span<const double>(x).subspan(s * n, n);
    surrogate[s] = model.evaluate(point);
    if (mcs) crude[s] = pr.y(point);
  }
  std::sort(surrogate.begin(), surrogate.end());
  std::sort(crude.begin(), crude.end());
  Sink sink(out_path, out);
  *sink << (mcs ? "probability,surrogate,mcs\n" : "probability,surrogate\n");
  for (std::size_t s = 0; s < total; ++s) {
    const double prob = static_cast<double>(s + 1) / static_cast<double>(total);
    if (mcs) {
      *sink << fmt::format("{},{},{}\n", sci(prob), sci(surrogate[s]), sci(crude[s]));
    } else {
      *sink << fmt::format("{},{}\n", sci(prob), sci(surrogate[s]));
    }
  }
  return exit_success;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::not_positive_definite: return exit_numerical_failure;
    case ErrorKind::dimension_limit: return exit_unsupported_dimension;
    default: return exit_config_error;
  }
}

}  // namespace

std::vector<std::string> expand_config_files(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string file;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Error(ErrorKind::config_parse, "--config needs a file name");
      file = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::config_parse, fmt::format("cannot read config file {}", file));
    std::string line;
    while (std::getline(in, line)) {
      line = detail::trim(line.substr(0, line.find('#')));
      if (line.empty()) continue;
      const auto eq = line.find('=');
      const std::string key = detail::trim(line.substr(0, eq));
      if (key.empty()) throw Error(ErrorKind::config_parse, fmt::format("config line '{}' has no key", line));
      if (eq == std::string::npos) {
        out.push_back("--" + key);
        continue;
      }
      std::string value = detail::trim(line.substr(eq + 1));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      if (value == "true") {
        out.push_back("--" + key);
      } else if (value != "false") {
        out.push_back("--" + key);
        out.push_back(value);
      }
    }
  }
  return out;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spline chaos expansion surrogates with measure-consistent orthonormal B-splines", "sce"};
  app.require_subcommand(1);

  ProblemFlags flags;
  std::string out_path = "model.sce";
  std::string gram_path;

  auto* fit = app.add_subcommand("fit", "Project an output function and report mean and variance");
  add_problem_flags(*fit, flags);
  fit->add_option("--out", out_path, "Model file to write (empty to skip)")->capture_default_str();
  fit->add_option("--dump-gram", gram_path, "CSV file receiving the Gram and whitening matrices");
  std::uint64_t unused_seed = 0;
  fit->add_option("--seed", unused_seed, "Accepted for config symmetry; fitting draws no random numbers");

  std::string table_dir = ".";
  auto* table1 = app.add_subcommand("table1", "Reproduce the univariate variance-error tables as CSV");
  table1->add_option("--out", table_dir, "Directory for table1a.csv, table1b.csv, table1c.csv");

  std::string bench_case;
  std::string bench_out = "-";
  auto* bench = app.add_subcommand("bench", "Run every configuration of one benchmark case");
  bench->add_option("--case", bench_case, "oscillatory, nonsmooth, near-discontinuous, ode, sobol4")->required();
  bench->add_option("--out", bench_out, "CSV file ('-' for stdout)");

  int grid_points = 0;
  std::string curve_out = "-";
  auto* curve = app.add_subcommand("curve", "Tabulate y and its surrogate on a uniform grid (N <= 2)");
  add_problem_flags(*curve, flags);
  curve->add_option("--grid-points", grid_points, "Points per axis (default 1001 for N=1, 201 for N=2)");
  curve->add_option("--out", curve_out, "CSV file ('-' for stdout)");

  long count = 10000;
  std::uint64_t seed = 1;
  bool mcs = false;
  std::string cdf_out = "-";
  auto* cdf = app.add_subcommand("cdf", "Sorted surrogate samples (empirical CDF), optionally with crude MCS");
  add_problem_flags(*cdf, flags);
  cdf->add_option("--count", count, "Sample size");
  cdf->add_option("--seed", seed, "Seed of the mt19937_64 stream");
  cdf->add_flag("--mcs", mcs, "Add a crude Monte Carlo column evaluated at the same inputs");
  cdf->add_option("--out", cdf_out, "CSV file ('-' for stdout)");

  try {
    std::vector<std::string> args = expand_config_files(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (fit->parsed()) return cmd_fit(flags, out_path, gram_path, out);
    if (table1->parsed()) return cmd_table1(table_dir, out);
    if (bench->parsed()) return cmd_bench(bench_case, bench_out, out);
    if (curve->parsed()) return cmd_curve(flags, grid_points, curve_out, out);
    if (cdf->parsed()) return cmd_cdf(flags, count, seed, mcs, cdf_out, out);
    return exit_config_error;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_success : exit_config_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  }
}

}  // namespace sce
