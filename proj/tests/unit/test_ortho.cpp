#include <doctest.h>

#include <cmath>
#include <random>

#include "sce/error.hpp"
#include "sce/ortho.hpp"
#include "sce/quadrature.hpp"

using namespace sce;

namespace {

UnivariateOrthoBasis make(int p, double a, double b, int e) {
  return {BsplineBasis(KnotSequence::open_uniform(p, a, b, e)), ProbabilityMeasure::uniform(a, b)};
}

// E[psi psi^T] on a rule exact for degree 2p piecewise polynomials
Matrix psi_gram(const UnivariateOrthoBasis& ob) {
  const auto pts = CompositeRule::on_knots(ob.knots(), ob.degree() + 1).expectation_points(ob.measure());
  const auto n = static_cast<std::size_t>(ob.size());
  Matrix m(n, n);
  for (std::size_t q = 0; q < pts.nodes.size(); ++q) {
    const auto psi = ob.eval(pts.nodes[q]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) += pts.weights[q] * psi[i] * psi[j];
  }
  return m;
}

}  // namespace

TEST_CASE("hand-computed two-element constant basis") {
  const auto ob = make(0, 0.0, 1.0, 2);
  const Matrix& g = ob.gram().entries;
  CHECK(g(0, 0) == 1.0);
  CHECK(g(0, 1) == doctest::Approx(0.5));
  CHECK(g(1, 0) == doctest::Approx(0.5));
  CHECK(g(1, 1) == doctest::Approx(0.5));
  const Matrix& q = ob.cholesky_factor();
  CHECK(q(0, 0) == doctest::Approx(1.0));
  CHECK(q(1, 0) == doctest::Approx(0.5));
  CHECK(q(1, 1) == doctest::Approx(0.5));
  const Matrix& w = ob.whitening();
  CHECK(w(0, 0) == doctest::Approx(1.0));
  CHECK(w(0, 1) == 0.0);
  CHECK(w(1, 0) == doctest::Approx(-1.0));
  CHECK(w(1, 1) == doctest::Approx(2.0));
  const auto psi = ob.eval(0.75);
  CHECK(psi[0] == 1.0);
  CHECK(psi[1] == doctest::Approx(1.0));
  CHECK(ob.eval(0.25)[1] == doctest::Approx(-1.0));
}

TEST_CASE("single constant and identity gram") {
  const auto ob = make(0, 0.0, 1.0, 1);
  CHECK(ob.gram().entries.rows() == 1);
  CHECK(ob.gram().entries(0, 0) == 1.0);
  SplineMomentMatrix id{Matrix::identity(4)};
  const auto w = whiten(id);
  CHECK(w.whitening == Matrix::identity(4));
}

TEST_CASE("gram is symmetric and whitening inverts it") {
  for (int p = 0; p <= 3; ++p) {
    for (int e : {1, 3, 8}) {
      const auto ob = make(p, -1.0, 1.0, e);
      const Matrix& g = ob.gram().entries;
      CHECK(g(0, 0) == 1.0);
      CHECK(max_abs_difference(g, g.transposed()) == 0.0);
      const Matrix& w = ob.whitening();
      // W^T W = G^{-1}  <=>  W G W^T = I
      CHECK(max_abs_difference(w * g * w.transposed(), Matrix::identity(g.rows())) < 1e-10);
    }
  }
}

TEST_CASE("orthonormality over the test grid") {
  for (int p = 0; p <= 3; ++p) {
    for (int e = 1; e <= 16; ++e) {
      for (auto [a, b] : {std::pair{-1.0, 1.0}, std::pair{0.0, 1.0}}) {
        const auto ob = make(p, a, b, e);
        CHECK(max_abs_difference(psi_gram(ob), Matrix::identity(static_cast<std::size_t>(ob.size()))) < 1e-10);
      }
    }
  }
}

TEST_CASE("first element is one and the rest have zero mean") {
  const auto ob = make(2, 0.0, 1.0, 5);
  const auto pts = CompositeRule::on_knots(ob.knots(), 3).expectation_points(ob.measure());
  std::vector<double> mean(static_cast<std::size_t>(ob.size()), 0.0);
  for (std::size_t q = 0; q < pts.nodes.size(); ++q) {
    const auto psi = ob.eval(pts.nodes[q]);
    CHECK(psi[0] == 1.0);
    for (std::size_t i = 0; i < psi.size(); ++i) mean[i] += pts.weights[q] * psi[i];
  }
  CHECK(mean[0] == doctest::Approx(1.0).epsilon(1e-10));
  for (std::size_t i = 1; i < mean.size(); ++i) CHECK(std::abs(mean[i]) < 1e-10);
}

TEST_CASE("B-splines are recovered from psi through the Cholesky factor") {
  // P = Q psi, and P_j = B_j for j >= 1
  const auto ob = make(3, -1.0, 1.0, 7);
  const Matrix& q = ob.cholesky_factor();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const double x = u(rng);
    const auto p = multiply(q, ob.eval(x));
    const auto b = ob.basis().eval_all(x);
    CHECK(std::abs(p[0] - 1.0) < 1e-12);
    for (std::size_t j = 1; j < b.size(); ++j) CHECK(std::abs(p[j] - b[j]) < 1e-12);
  }
}

TEST_CASE("local auxiliary entries match the dense vector") {
  const auto ob = make(2, 0.0, 1.0, 6);
  for (double x : {0.0, 0.1, 1.0 / 6.0, 0.5, 0.93, 1.0}) {
    const auto dense = ob.auxiliary(x);
    const auto local = ob.auxiliary_local(x);
    std::vector<double> rebuilt(dense.size(), 0.0);
    for (std::size_t i = 0; i < local.index.size(); ++i) rebuilt[static_cast<std::size_t>(local.index[i])] += local.value[i];
    CHECK(local.index.front() == 0);
    CHECK(rebuilt == dense);
  }
}

TEST_CASE("element without probability mass breaks positive definiteness") {
  const auto m = ProbabilityMeasure::tabulated({0.0, 0.5, 0.6, 1.0}, {1.0, 0.0, 0.0, 1.0});
  const auto k = KnotSequence::open_with_multiplicities(0, {0.0, 0.5, 0.6, 1.0}, {1, 1});
  try {
    UnivariateOrthoBasis ob(BsplineBasis(k), m);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_positive_definite);
  }
}

TEST_CASE("measure must cover the knot interval") {
  try {
    UnivariateOrthoBasis ob(BsplineBasis(KnotSequence::open_uniform(1, 0.0, 1.0, 2)), ProbabilityMeasure::uniform(-1, 1));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::support_mismatch);
  }
}
