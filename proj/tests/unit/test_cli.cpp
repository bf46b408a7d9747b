#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sce/cli.hpp"
#include "text_util.hpp"

using namespace sce;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

double field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) return detail::parse_double(line.substr(key.size() + 1));
  }
  FAIL("missing " << key);
  return 0.0;
}

std::vector<std::vector<double>> read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    for (const auto& cell : detail::split(line, ',')) row.push_back(detail::parse_double(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const auto tmp = std::filesystem::temp_directory_path();

}  // namespace

TEST_CASE("fit reports the oscillatory variance") {
  const auto r = run({"fit", "--builtin", "oscillatory", "--p", "3", "--elements", "32", "--out", (tmp / "osc.sce").string()});
  REQUIRE(r.code == exit_success);
  CHECK(std::abs(field(r.out, "variance") - 0.5) / 0.5 == doctest::Approx(1.6e-8).epsilon(0.01));
  CHECK(field(r.out, "coefficients") == 35);
  CHECK(std::filesystem::exists(tmp / "osc.sce"));
}

TEST_CASE("fit of a user expression") {
  const auto r = run({"fit", "--expr", "x1*x1", "--measure", "uniform(-1,1)", "--p", "2", "--elements", "1", "--out", ""});
  REQUIRE(r.code == exit_success);
  CHECK(field(r.out, "variance") == doctest::Approx(4.0 / 45.0).epsilon(1e-13));
  CHECK(field(r.out, "mean") == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("knot strings, per-axis degrees and gram dump") {
  const auto gram = tmp / "gram.csv";
  const auto r = run({"fit", "--expr", "x1 + x2^2", "--measure", "uniform(0,1)", "--measure", "uniform(-1,1)", "--knots",
                      "1; 0, 0.5, 1", "--knots", "2; -1, 0^2, 1", "--dump-gram", gram.string(), "--out", ""});
  REQUIRE(r.code == exit_success);
  CHECK(field(r.out, "coefficients") == 3 * 5);
  const auto text = slurp(gram);
  CHECK(text.rfind("axis,matrix,row,col,value\n", 0) == 0);
  CHECK(text.find("2,W,4,4,") != std::string::npos);
}

TEST_CASE("config-parse errors") {
  CHECK(run({"fit", "--expr", "x1*x2", "--measure", "uniform(-1,1)", "--p", "2"}).code == exit_config_error);
  CHECK(run({"fit", "--expr", "x1", "--measure", "uniform(-1,1)"}).code == exit_config_error);
  CHECK(run({"fit", "--builtin", "oscillatory", "--expr", "x1", "--p", "1"}).code == exit_config_error);
  CHECK(run({"fit", "--builtin", "nope", "--p", "1"}).code == exit_config_error);
  CHECK(run({"fit", "--builtin", "ode", "--p", "1", "2", "3"}).code == exit_config_error);
  CHECK(run({"fit", "--builtin", "oscillatory", "--p", "1", "--bogus"}).code == exit_config_error);
  CHECK(run({"fit", "--expr", "x1", "--measure", "uniform(1,1)", "--p", "1"}).code == exit_config_error);
  CHECK(run({}).code == exit_config_error);
  CHECK(run({"--help"}).code == exit_success);
}

TEST_CASE("numerical failure and dimension limit exit codes") {
  const auto r = run({"fit", "--expr", "x1", "--measure", "tabulated(0:1, 0.5:0, 0.6:0, 1:1)", "--p", "0", "--knots",
                      "0; 0, 0.5, 0.6, 1", "--out", ""});
  CHECK(r.code == exit_numerical_failure);
  std::vector<std::string> seven{"fit", "--expr", "x1", "--p", "1"};
  for (int i = 0; i < 7; ++i) {
    seven.push_back("--measure");
    seven.push_back("uniform(0,1)");
  }
  CHECK(run(seven).code == exit_unsupported_dimension);
  CHECK(run({"curve", "--builtin", "sobol4", "--p", "1"}).code == exit_unsupported_dimension);
}

TEST_CASE("curves") {
  // h = 1/8 peaks at 0.0199 on the boundary; h = 1/12 is the first mesh below 0.01
  for (auto [elements, bound] : {std::pair{"16", 0.02}, std::pair{"24", 0.01}}) {
    const auto r = run({"curve", "--builtin", "oscillatory", "--p", "2", "--elements", elements});
    REQUIRE(r.code == exit_success);
    const auto rows = read_csv(r.out);
    CHECK(rows.size() == 1001);
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, std::abs(row[1] - row[2]));
    CHECK(worst < bound);
  }

  const auto c = run({"curve", "--expr", "3", "--measure", "uniform(0,1)", "--measure", "uniform(0,1)", "--p", "1",
                      "--elements", "2", "--grid-points", "11"});
  REQUIRE(c.code == exit_success);
  const auto grid = read_csv(c.out);
  CHECK(grid.size() == 121);
  for (const auto& row : grid) CHECK(row[3] == doctest::Approx(3.0).epsilon(1e-13));

  const auto ode = run({"curve", "--builtin", "ode", "--p", "2", "--elements", "20", "--repeat-center", "--grid-points", "101"});
  REQUIRE(ode.code == exit_success);
  double worst_ode = 0.0;
  for (const auto& row : read_csv(ode.out)) worst_ode = std::max(worst_ode, std::abs(row[2] - row[3]));
  CHECK(worst_ode < 1e-4);
}

TEST_CASE("cdf samples") {
  const std::vector<std::string> args{"cdf", "--builtin", "nonsmooth", "--p", "2", "--elements", "4", "--count", "500",
                                      "--seed", "3", "--mcs"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == exit_success);
  CHECK(a.out == b.out);
  const auto rows = read_csv(a.out);
  CHECK(rows.size() == 500);
  CHECK(rows.back()[0] == 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] >= rows[i - 1][1]);

  const auto one = run({"cdf", "--builtin", "nonsmooth", "--p", "1", "--count", "1"});
  CHECK(read_csv(one.out).size() == 1);
  CHECK(run({"cdf", "--builtin", "nonsmooth", "--p", "1", "--count", "0"}).code == exit_config_error);
}

TEST_CASE("table1 writes three files") {
  const auto dir = tmp / "sce_table1";
  const auto r = run({"table1", "--out", dir.string()});
  REQUIRE(r.code == exit_success);
  const auto a = slurp(dir / "table1a.csv");
  CHECK(a.find("oscillatory,SCE,2,1/8,16,simple,1.5349") != std::string::npos);
  CHECK(slurp(dir / "table1c.csv").find("near-discontinuous,SCE,2,2/33,33,simple,1.5029") != std::string::npos);
  CHECK(slurp(dir / "table1b.csv").find("nonsmooth,PCE,20,2,1,simple,") != std::string::npos);
}

TEST_CASE("config files expand to flags") {
  const auto cfg = tmp / "sce_fit.cfg";
  {
    std::ofstream f(cfg);
    f << "# quadratic fit\nexpr = \"x1*x1\"\nmeasure = uniform(-1,1)\np = 2\n\nelements = 1  # one element\nout =\"\"\n";
  }
  const auto args = expand_config_files({"fit", "--config", cfg.string()});
  CHECK(args == std::vector<std::string>{"fit", "--expr", "x1*x1", "--measure", "uniform(-1,1)", "--p", "2", "--elements", "1", "--out", ""});
  const auto r = run({"fit", "--config", cfg.string()});
  REQUIRE(r.code == exit_success);
  CHECK(field(r.out, "variance") == doctest::Approx(4.0 / 45.0));
  CHECK(run({"fit", "--config", (tmp / "missing.cfg").string()}).code == exit_config_error);
}
