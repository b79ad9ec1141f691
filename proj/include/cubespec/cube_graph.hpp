#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cubespec {

// Vertices of Q^n are the integers 0 .. 2^n - 1; coordinate i of a vertex is
// bit i of its index, so the neighbor across direction i is v ^ (1 << i).
using Vertex = std::uint32_t;
using DirectionMask = std::uint32_t;

inline constexpr int kMinDimension = 1;
inline constexpr int kMaxDimension = 30;

// Below this probability the sampler walks the canonical edge sequence with
// geometric skips instead of drawing one variate per edge.
inline constexpr double kGeometricSkipThreshold = 0x1.0p-20;

inline constexpr std::string_view kBernoulliSampler = "splitmix64-bernoulli-v1";
inline constexpr std::string_view kGeometricSampler = "splitmix64-geometric-v1";

struct SampleParams {
  int n = 1;
  double p = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

struct Edge {
  Vertex v;
  Vertex w;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A spanning subgraph of the n-cube stored as one n-bit direction mask per
// vertex. Immutable after construction; bit i of mask(v) equals bit i of
// mask(v ^ 2^i) for every v and i.
class HypercubeSubgraph {
 public:
  static HypercubeSubgraph Empty(int n);
  static HypercubeSubgraph FullCube(int n);
  // Validates range and symmetry of the masks.
  static HypercubeSubgraph FromMasks(int n, std::vector<DirectionMask> masks);

  int dimension() const noexcept { return n_; }
  std::uint64_t vertex_count() const noexcept { return masks_.size(); }
  std::uint64_t edge_count() const noexcept { return edge_count_; }
  std::span<const DirectionMask> masks() const noexcept { return masks_; }

  // Unchecked accessors for hot loops.
  DirectionMask mask(Vertex v) const noexcept { return masks_[v]; }
  int degree_unchecked(Vertex v) const noexcept {
    return std::popcount(masks_[v]);
  }
  bool has_edge(Vertex v, int direction) const noexcept {
    return (masks_[v] >> direction) & 1u;
  }

  // Throws kOutOfRange for v >= 2^n.
  int degree(Vertex v) const;

  // Copy with the cube edge {v, v ^ 2^direction} present.
  HypercubeSubgraph WithEdge(Vertex v, int direction) const;

 private:
  HypercubeSubgraph(int n, std::vector<DirectionMask> masks,
                    std::uint64_t edge_count)
      : n_(n), masks_(std::move(masks)), edge_count_(edge_count) {}

  int n_;
  std::vector<DirectionMask> masks_;
  std::uint64_t edge_count_;
};

void CheckDimension(int n);

std::uint64_t DeriveTrialSeed(const SampleParams& params);

// Name of the sampler variant used for the given probability.
std::string_view SamplerAlgorithm(double p);

// Canonical edges are enumerated direction-major: for i = 0 .. n-1, for
// r = 0 .. 2^(n-1)-1, the edge {v, v ^ 2^i} with v = r with a zero bit
// inserted at position i. The Bernoulli sampler consumes exactly one uniform
// variate per canonical edge in that order. The geometric sampler consumes
// one variate per present edge plus one for the terminating skip.
HypercubeSubgraph SampleSubgraph(const SampleParams& params);

int MaxDegree(const HypercubeSubgraph& g);

// Index d holds the number of vertices of degree d, for d = 0 .. n.
std::vector<std::uint64_t> DegreeHistogram(const HypercubeSubgraph& g);

// Present edges as (v, w), v < w, sorted lexicographically.
std::vector<Edge> ToEdgeList(const HypercubeSubgraph& g);
HypercubeSubgraph FromEdgeList(int n, std::span<const Edge> edges);

// Text format: "n m" on the first line, then m lines "v w".
void WriteEdgeList(const HypercubeSubgraph& g, std::ostream& out);
HypercubeSubgraph ReadEdgeList(std::istream& in);
void WriteEdgeListFile(const HypercubeSubgraph& g, const std::string& path);
HypercubeSubgraph ReadEdgeListFile(const std::string& path);

inline Vertex InsertZeroBit(std::uint32_t r, int position) noexcept {
  const std::uint32_t low = r & ((1u << position) - 1u);
  return ((r ^ low) << 1) | low;
}

}  // namespace cubespec
