#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cubespec/cube_graph.hpp"
#include "cubespec/eigensolve.hpp"
#include "cubespec/error.hpp"
#include "oracles.hpp"

using namespace cubespec;

namespace {

oracle::Matrix OracleMatrix(const HypercubeSubgraph& g) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const Edge& e : ToEdgeList(g)) edges.emplace_back(e.v, e.w);
  return oracle::Adjacency(g.dimension(), edges);
}

HypercubeSubgraph Star(int n, int k) {
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i) edges.push_back({0, Vertex{1} << i});
  return FromEdgeList(n, edges);
}

}  // namespace

TEST_CASE("matvec on regular and empty graphs") {
  const auto full = HypercubeSubgraph::FullCube(6);
  const std::vector<double> ones(64, 1.0);
  for (double y : Matvec(full, ones)) CHECK(y == 6.0);
  for (double y : Matvec(HypercubeSubgraph::Empty(6), ones)) CHECK(y == 0.0);
}

TEST_CASE("matvec matches the dense product oracle") {
  const auto g = SampleSubgraph({3, 0.5, 42, 0});
  std::vector<double> x(8);
  std::iota(x.begin(), x.end(), 1.0);
  x[5] = -2.5;
  const auto y = Matvec(g, x);
  const auto expect = oracle::Multiply(OracleMatrix(g), x);
  for (std::size_t i = 0; i < 8; ++i) CHECK(y[i] == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("full cube largest eigenvalue equals the dimension") {
  for (int n : {1, 2, 5, 10, 16}) {
    const auto r = LanczosLambda1(HypercubeSubgraph::FullCube(n));
    CHECK(r.converged);
    CHECK(std::abs(r.lambda1 - n) <= 1e-8);
  }
}

TEST_CASE("star eigenvalue is the square root of its size") {
  const auto r = LanczosLambda1(Star(5, 5));
  CHECK(std::abs(r.lambda1 - std::sqrt(5.0)) <= 1e-10);
  CHECK(r.residual <= 1e-10 * std::max(1.0, r.lambda1));
}

TEST_CASE("lanczos agrees with dense jacobi and power iteration") {
  int checked = 0;
  for (int n : {1, 2, 3}) {
    for (double p : {0.2, 0.5, 0.8}) {
      for (std::uint64_t t = 0; t < 200; ++t) {
        const auto g = SampleSubgraph({n, p, 1234, t});
        const auto spectrum = DenseSpectrum(g);
        const auto r = LanczosLambda1(g);
        REQUIRE(std::abs(r.lambda1 - spectrum.front()) <= 1e-8);
        ++checked;
        if (t % 20 == 0) {
          CHECK(std::abs(oracle::PowerLargest(OracleMatrix(g)) - spectrum.front()) <= 1e-8);
        }
      }
    }
  }
  CHECK(checked == 1800);
}

TEST_CASE("returned vector is a unit eigenvector with the reported residual") {
  SolverConfig cfg;
  cfg.want_vector = true;
  const auto g = SampleSubgraph({9, 0.4, 5, 1});
  const auto r = LanczosLambda1(g, cfg);
  REQUIRE(r.vector);
  double norm = 0.0;
  for (double v : *r.vector) norm += v * v;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.converged);
  CHECK(ResidualNorm(g, *r.vector, r.lambda1) <= cfg.tol * std::max(1.0, r.lambda1));
}

TEST_CASE("restarting and the plain recurrence reach the same value") {
  const auto g = SampleSubgraph({14, 0.5, 77, 0});
  SolverConfig small;
  small.max_basis = 8;
  small.max_iter = 5000;
  SolverConfig plain;
  plain.reorthogonalize = false;
  plain.max_iter = 5000;
  const double ref = LanczosLambda1(g).lambda1;
  const auto a = LanczosLambda1(g, small);
  const auto b = LanczosLambda1(g, plain);
  CHECK(a.converged);
  CHECK(std::abs(a.lambda1 - ref) <= 1e-8);
  CHECK(std::abs(b.lambda1 - ref) <= 1e-8);
}

TEST_CASE("empty graph short-circuits") {
  const auto r = LanczosLambda1(HypercubeSubgraph::Empty(7));
  CHECK(r.lambda1 == 0.0);
  CHECK(r.converged);
}

TEST_CASE("non-convergence is reported, not hidden") {
  SolverConfig cfg;
  cfg.max_iter = 2;
  cfg.max_basis = 3;
  const auto r = LanczosLambda1(SampleSubgraph({12, 0.5, 3, 0}), cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations <= 2);
}

TEST_CASE("dense spectra of small cubes") {
  const auto q2 = DenseSpectrum(HypercubeSubgraph::FullCube(2));
  const double expect2[] = {2, 0, 0, -2};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(q2[i] - expect2[i]) <= 1e-12);
  const auto q1 = DenseSpectrum(HypercubeSubgraph::FullCube(1));
  CHECK(q1[0] == doctest::Approx(1.0));
  CHECK(q1[1] == doctest::Approx(-1.0));

  const auto q4 = DenseSpectrum(HypercubeSubgraph::FullCube(4));
  std::size_t idx = 0;
  for (int i = 0; i <= 4; ++i) {
    const int mult = static_cast<int>(oracle::Binomial(4, i));
    for (int j = 0; j < mult; ++j, ++idx) CHECK(std::abs(q4[idx] - (4 - 2 * i)) <= 1e-10);
  }
  CHECK(idx == q4.size());
  CHECK_THROWS_AS(DenseSpectrum(HypercubeSubgraph::Empty(11)), Error);
}

TEST_CASE("jacobi eigenvectors diagonalize the matrix") {
  DenseSymmetric a(3);
  a(0, 0) = 2; a(0, 1) = a(1, 0) = -1; a(1, 1) = 2; a(1, 2) = a(2, 1) = -1; a(2, 2) = 2;
  const auto r = JacobiEigen(a, true);
  CHECK(r.eigenvalues[0] == doctest::Approx(2 + std::sqrt(2.0)));
  CHECK(r.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(r.eigenvalues[2] == doctest::Approx(2 - std::sqrt(2.0)));
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      double av = 0.0;
      for (std::size_t j = 0; j < 3; ++j) av += a(i, j) * r.eigenvectors[j * 3 + k];
      CHECK(av == doctest::Approx(r.eigenvalues[k] * r.eigenvectors[i * 3 + k]));
    }
  }
}
