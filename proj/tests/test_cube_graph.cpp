#include <doctest.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "cubespec/cube_graph.hpp"
#include "cubespec/error.hpp"
#include "cubespec/rng.hpp"

using namespace cubespec;

namespace {

HypercubeSubgraph Sample(int n, double p, std::uint64_t seed = 7, std::uint64_t trial = 0) {
  return SampleSubgraph({n, p, seed, trial});
}

// Degree table rebuilt from the exported edge list, bypassing the masks.
std::vector<int> DegreesFromEdges(const HypercubeSubgraph& g) {
  std::vector<int> deg(g.vertex_count(), 0);
  for (const Edge& e : ToEdgeList(g)) {
    ++deg[e.v];
    ++deg[e.w];
  }
  return deg;
}

}  // namespace

TEST_CASE("sampling at the probability extremes") {
  const auto empty = Sample(5, 0.0);
  CHECK(empty.edge_count() == 0);
  CHECK(MaxDegree(empty) == 0);
  const auto full = Sample(5, 1.0);
  CHECK(full.edge_count() == 80);
  CHECK(MaxDegree(full) == 5);
}

TEST_CASE("full cube edge counts") {
  CHECK(HypercubeSubgraph::FullCube(1).edge_count() == 1);
  CHECK(HypercubeSubgraph::FullCube(2).edge_count() == 4);
  CHECK(HypercubeSubgraph::FullCube(20).edge_count() == 10485760u);
}

TEST_CASE("mean edge count matches the binomial expectation") {
  double total = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) total += Sample(10, 0.3, 11, t).edge_count();
  const double expected = 0.3 * 10 * 512;
  CHECK(std::abs(total / 100 - expected) <= 0.05 * expected);
}

TEST_CASE("sampling is deterministic per trial") {
  const auto a = Sample(9, 0.4, 3, 5);
  const auto b = Sample(9, 0.4, 3, 5);
  const auto c = Sample(9, 0.4, 3, 6);
  CHECK(std::ranges::equal(a.masks(), b.masks()));
  CHECK_FALSE(std::ranges::equal(a.masks(), c.masks()));
}

TEST_CASE("geometric-skip sampler for very small p") {
  CHECK(SamplerAlgorithm(0.5) == kBernoulliSampler);
  CHECK(SamplerAlgorithm(1e-9) == kGeometricSampler);
  // n 2^(n-1) p is about 20 expected edges at n = 20, p = 2^-21.
  double total = 0.0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto g = Sample(20, std::ldexp(1.0, -21), 1, t);
    total += g.edge_count();
    for (std::size_t v = 0; v < g.vertex_count(); v += 4099) {
      CHECK(g.degree(static_cast<Vertex>(v)) == std::popcount(g.mask(static_cast<Vertex>(v))));
    }
  }
  CHECK(total / 50 == doctest::Approx(20 * 0.25).epsilon(0.3));
}

TEST_CASE("degree agrees with an edge-list oracle") {
  CHECK(HypercubeSubgraph::FullCube(3).degree(5) == 3);
  CHECK(HypercubeSubgraph::Empty(3).degree(5) == 0);
  const auto g = Sample(8, 0.5, 0xabcdef);
  const auto deg = DegreesFromEdges(g);
  CHECK(g.degree(0) == deg[0]);
  for (Vertex v = 0; v < g.vertex_count(); ++v) REQUIRE(g.degree(v) == deg[v]);
  CHECK_THROWS_AS(g.degree(256), Error);
}

TEST_CASE("max degree and histogram agree with the edge-list oracle") {
  const auto g = Sample(10, 0.1, 99);
  const auto deg = DegreesFromEdges(g);
  CHECK(MaxDegree(g) == *std::max_element(deg.begin(), deg.end()));
  const auto hist = DegreeHistogram(g);
  REQUIRE(hist.size() == 11);
  for (int d = 0; d <= 10; ++d) {
    CHECK(hist[d] == static_cast<std::uint64_t>(std::count(deg.begin(), deg.end(), d)));
  }
  const auto full = DegreeHistogram(HypercubeSubgraph::FullCube(4));
  CHECK(full[4] == 16);
}

TEST_CASE("edge-list conversion") {
  CHECK(ToEdgeList(FromEdgeList(3, {})).empty());
  const auto q2 = ToEdgeList(HypercubeSubgraph::FullCube(2));
  CHECK(q2 == std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  const std::array<Edge, 1> diagonal{{{0, 3}}};
  CHECK_THROWS_AS(FromEdgeList(2, diagonal), Error);
  const std::array<Edge, 2> dup{{{0, 1}, {1, 0}}};
  CHECK_THROWS_AS(FromEdgeList(2, dup), Error);
  const std::array<Edge, 1> outside{{{4, 5}}};
  CHECK_THROWS_AS(FromEdgeList(2, outside), Error);
}

TEST_CASE("edge-list text round trip") {
  const auto g = Sample(6, 0.35, 4);
  std::stringstream ss;
  WriteEdgeList(g, ss);
  std::string first;
  std::getline(ss, first);
  CHECK(first == "6 " + std::to_string(g.edge_count()));
  ss.seekg(0);
  const auto back = ReadEdgeList(ss);
  CHECK(std::ranges::equal(back.masks(), g.masks()));

  std::istringstream unordered("2 2\n1 3\n0 1\n");
  CHECK_THROWS_AS(ReadEdgeList(unordered), Error);
  std::istringstream wrong_count("2 3\n0 1\n");
  CHECK_THROWS_AS(ReadEdgeList(wrong_count), Error);
  CHECK_THROWS_AS(ReadEdgeListFile("/nonexistent/graph.txt"), Error);
}

TEST_CASE("masks must be symmetric and within the dimension") {
  CHECK_THROWS_AS(HypercubeSubgraph::FromMasks(2, {1, 0, 0, 0}), Error);
  CHECK_THROWS_AS(HypercubeSubgraph::FromMasks(2, {4, 0, 0, 0}), Error);
  CHECK(HypercubeSubgraph::FromMasks(2, {1, 1, 0, 0}).edge_count() == 1);
  CHECK_THROWS_AS(CheckDimension(0), Error);
  CHECK_THROWS_AS(CheckDimension(31), Error);
}

TEST_CASE("derived seeds: no collisions across consecutive trials") {
  constexpr std::uint64_t kTrials = 1'000'000;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(kTrials * 2);
  std::array<std::uint64_t, 256> buckets{};
  for (std::uint64_t t = 0; t < kTrials; ++t) {
    const std::uint64_t s = DeriveTrialSeed({12, 0.3, 2024, t});
    seen.insert(s);
    ++buckets[s >> 56];
  }
  CHECK(seen.size() == kTrials);
  CHECK(DeriveTrialSeed({12, 0.3, 2024, 17}) == DeriveTrialSeed({12, 0.3, 2024, 17}));

  // Chi-square with 255 degrees of freedom; the 0.001 critical value is 330.52.
  const double expected = static_cast<double>(kTrials) / 256;
  double chi2 = 0.0;
  for (std::uint64_t b : buckets) chi2 += (b - expected) * (b - expected) / expected;
  CHECK(chi2 < 330.52);
}
