#include "cubespec/cube_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cubespec/error.hpp"
#include "cubespec/rng.hpp"

namespace cubespec {
namespace {

DirectionMask FullMask(int n) {
  return n >= 32 ? ~DirectionMask{0} : ((DirectionMask{1} << n) - 1u);
}

std::uint64_t CountEdges(std::span<const DirectionMask> masks) {
  std::uint64_t twice = 0;
  for (DirectionMask m : masks) twice += std::popcount(m);
  return twice / 2;
}

void CheckVertex(int n, std::uint64_t v) {
  if (v >= (std::uint64_t{1} << n)) {
    Fail(ErrorCode::kOutOfRange, "vertex " + std::to_string(v) +
                                     " out of range for n=" +
                                     std::to_string(n));
  }
}

}  // namespace

void CheckDimension(int n) {
  if (n < kMinDimension || n > kMaxDimension) {
    Fail(ErrorCode::kOutOfRange,
         "dimension n=" + std::to_string(n) + " outside [1, 30]");
  }
}

HypercubeSubgraph HypercubeSubgraph::Empty(int n) {
  CheckDimension(n);
  return HypercubeSubgraph(n, std::vector<DirectionMask>(std::size_t{1} << n),
                           0);
}

HypercubeSubgraph HypercubeSubgraph::FullCube(int n) {
  CheckDimension(n);
  const std::uint64_t edges = static_cast<std::uint64_t>(n) << (n - 1);
  return HypercubeSubgraph(
      n, std::vector<DirectionMask>(std::size_t{1} << n, FullMask(n)), edges);
}

HypercubeSubgraph HypercubeSubgraph::FromMasks(int n,
                                               std::vector<DirectionMask> masks) {
  CheckDimension(n);
  if (masks.size() != (std::size_t{1} << n)) {
    Fail(ErrorCode::kInvalidArgument, "mask array must have 2^n entries");
  }
  const DirectionMask full = FullMask(n);
  for (std::size_t v = 0; v < masks.size(); ++v) {
    if (masks[v] & ~full) {
      Fail(ErrorCode::kInvalidArgument,
           "mask of vertex " + std::to_string(v) + " has bits beyond n");
    }
    for (int i = 0; i < n; ++i) {
      const std::size_t w = v ^ (std::size_t{1} << i);
      if (((masks[v] >> i) & 1u) != ((masks[w] >> i) & 1u)) {
        Fail(ErrorCode::kInvalidArgument,
             "asymmetric masks at vertex " + std::to_string(v) +
                 " direction " + std::to_string(i));
      }
    }
  }
  const std::uint64_t m = CountEdges(masks);
  return HypercubeSubgraph(n, std::move(masks), m);
}

int HypercubeSubgraph::degree(Vertex v) const {
  CheckVertex(n_, v);
  return degree_unchecked(v);
}

HypercubeSubgraph HypercubeSubgraph::WithEdge(Vertex v, int direction) const {
  CheckVertex(n_, v);
  if (direction < 0 || direction >= n_) {
    Fail(ErrorCode::kOutOfRange, "direction out of range");
  }
  if (has_edge(v, direction)) return *this;
  std::vector<DirectionMask> masks = masks_;
  const DirectionMask bit = DirectionMask{1} << direction;
  masks[v] |= bit;
  masks[v ^ bit] |= bit;
  return HypercubeSubgraph(n_, std::move(masks), edge_count_ + 1);
}

std::uint64_t DeriveTrialSeed(const SampleParams& params) {
  return DeriveSeed(params.master_seed, params.n, params.p,
                    params.trial_index);
}

std::string_view SamplerAlgorithm(double p) {
  return (p > 0.0 && p < kGeometricSkipThreshold) ? kGeometricSampler
                                                  : kBernoulliSampler;
}

HypercubeSubgraph SampleSubgraph(const SampleParams& params) {
  CheckDimension(params.n);
  if (!(params.p >= 0.0 && params.p <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "edge probability outside [0, 1]");
  }
  const int n = params.n;
  const std::uint32_t half = std::uint32_t{1} << (n - 1);
  std::vector<DirectionMask> masks(std::size_t{1} << n);
  std::uint64_t m = 0;
  SplitMix64 rng(DeriveTrialSeed(params));

  auto add = [&](int i, std::uint32_t r) {
    const Vertex v = InsertZeroBit(r, i);
    const DirectionMask bit = DirectionMask{1} << i;
    masks[v] |= bit;
    masks[v | bit] |= bit;
    ++m;
  };

  if (SamplerAlgorithm(params.p) == kGeometricSampler) {
    // Gap before the next present edge is Geometric(p) on {0, 1, ...}.
    const std::uint64_t total = static_cast<std::uint64_t>(n) * half;
    const double log_q = std::log1p(-params.p);
    std::uint64_t e = 0;
    while (true) {
      const double u = 1.0 - rng.Uniform();  // (0, 1]
      const double gap = std::floor(std::log(u) / log_q);
      if (gap >= static_cast<double>(total - e)) break;
      e += static_cast<std::uint64_t>(gap);
      add(static_cast<int>(e >> (n - 1)), static_cast<std::uint32_t>(e & (half - 1)));
      if (++e >= total) break;
    }
  } else {
    const double p = params.p;
    for (int i = 0; i < n; ++i) {
      for (std::uint32_t r = 0; r < half; ++r) {
        if (rng.Uniform() < p) add(i, r);
      }
    }
  }
  return HypercubeSubgraph::FromMasks(n, std::move(masks));
}

int MaxDegree(const HypercubeSubgraph& g) {
  int best = 0;
  for (DirectionMask m : g.masks()) best = std::max(best, std::popcount(m));
  return best;
}

std::vector<std::uint64_t> DegreeHistogram(const HypercubeSubgraph& g) {
  std::vector<std::uint64_t> hist(g.dimension() + 1, 0);
  for (DirectionMask m : g.masks()) ++hist[std::popcount(m)];
  return hist;
}

std::vector<Edge> ToEdgeList(const HypercubeSubgraph& g) {
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  const int n = g.dimension();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const DirectionMask m = g.mask(v);
    // Ascending direction with v's bit clear gives ascending w = v | 2^i.
    for (int i = 0; i < n; ++i) {
      if (((m >> i) & 1u) && !((v >> i) & 1u)) {
        edges.push_back({v, v | (Vertex{1} << i)});
      }
    }
  }
  return edges;
}

HypercubeSubgraph FromEdgeList(int n, std::span<const Edge> edges) {
  CheckDimension(n);
  std::vector<DirectionMask> masks(std::size_t{1} << n);
  for (const Edge& e : edges) {
    CheckVertex(n, e.v);
    CheckVertex(n, e.w);
    const Vertex diff = e.v ^ e.w;
    if (std::popcount(diff) != 1) {
      Fail(ErrorCode::kInvalidArgument,
           "(" + std::to_string(e.v) + ", " + std::to_string(e.w) +
               ") is not an edge of the cube");
    }
    if (masks[e.v] & diff) {
      Fail(ErrorCode::kInvalidArgument,
           "duplicate edge (" + std::to_string(e.v) + ", " +
               std::to_string(e.w) + ")");
    }
    masks[e.v] |= diff;
    masks[e.w] |= diff;
  }
  return HypercubeSubgraph::FromMasks(n, std::move(masks));
}

void WriteEdgeList(const HypercubeSubgraph& g, std::ostream& out) {
  out << g.dimension() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : ToEdgeList(g)) out << e.v << ' ' << e.w << '\n';
}

HypercubeSubgraph ReadEdgeList(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto parse_error = [&](const std::string& what) {
    Fail(ErrorCode::kParse,
         "edge list line " + std::to_string(line_no) + ": " + what);
  };

  if (!next_line()) parse_error("missing header \"n m\"");
  long long n = 0;
  long long m = 0;
  {
    std::istringstream hdr(line);
    std::string extra;
    if (!(hdr >> n >> m) || (hdr >> extra) || m < 0) {
      parse_error("expected header \"n m\"");
    }
  }
  if (n < kMinDimension || n > kMaxDimension) parse_error("bad dimension");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    if (!next_line()) parse_error("expected " + std::to_string(m) + " edges");
    std::istringstream row(line);
    long long v = -1;
    long long w = -1;
    std::string extra;
    if (!(row >> v >> w) || (row >> extra) || v < 0 || w < 0) {
      parse_error("expected \"v w\"");
    }
    if (v >= w) parse_error("edges must be listed with v < w");
    edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(w)});
    if (edges.size() > 1 && !(edges[edges.size() - 2] < edges.back())) {
      parse_error("edges not in canonical order");
    }
  }
  if (next_line()) parse_error("trailing content after edge list");
  try {
    return FromEdgeList(static_cast<int>(n), edges);
  } catch (const Error& e) {
    Fail(ErrorCode::kParse, e.what());
  }
}

void WriteEdgeListFile(const HypercubeSubgraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  WriteEdgeList(g, out);
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path);
}

HypercubeSubgraph ReadEdgeListFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  return ReadEdgeList(in);
}

}  // namespace cubespec
