#include "cubespec/components.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "cubespec/degree_theory.hpp"
#include "cubespec/error.hpp"

namespace cubespec {
namespace {

class VisitedBitmap {
 public:
  explicit VisitedBitmap(std::uint64_t size) : words_((size + 63) / 64, 0) {}
  bool test(Vertex v) const { return (words_[v >> 6] >> (v & 63)) & 1u; }
  void set(Vertex v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }

 private:
  std::vector<std::uint64_t> words_;
};

std::size_t LocalIndex(std::span<const Vertex> members, Vertex v) {
  return static_cast<std::size_t>(
      std::lower_bound(members.begin(), members.end(), v) - members.begin());
}

}  // namespace

ComponentCensus ConnectedComponents(const HypercubeSubgraph& g) {
  ComponentCensus census;
  VisitedBitmap visited(g.vertex_count());
  std::deque<Vertex> queue;
  for (Vertex root = 0; root < g.vertex_count(); ++root) {
    if (visited.test(root)) continue;
    const std::size_t begin = census.vertices.size();
    std::uint64_t degree_sum = 0;
    visited.set(root);
    queue.push_back(root);
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      census.vertices.push_back(v);
      DirectionMask m = g.mask(v);
      degree_sum += std::popcount(m);
      while (m != 0) {
        const Vertex w = v ^ (Vertex{1} << std::countr_zero(m));
        if (!visited.test(w)) {
          visited.set(w);
          queue.push_back(w);
        }
        m &= m - 1;
      }
    }
    std::sort(census.vertices.begin() + static_cast<std::ptrdiff_t>(begin),
              census.vertices.end());
    census.offsets.push_back(census.vertices.size());
    const std::uint64_t k = degree_sum / 2;
    census.edges.push_back(k);
    ++census.yk[k];
    census.largest_component_edges = std::max(census.largest_component_edges, k);
  }
  return census;
}

double ComponentLambda1(const HypercubeSubgraph& g,
                        std::span<const Vertex> members, std::uint64_t edges,
                        const SolverConfig& config) {
  if (edges == 0) return 0.0;
  const std::size_t order = members.size();
  if (order <= kDenseComponentLimit) {
    DenseSymmetric a(order);
    for (std::size_t i = 0; i < order; ++i) {
      DirectionMask m = g.mask(members[i]);
      while (m != 0) {
        const Vertex w = members[i] ^ (Vertex{1} << std::countr_zero(m));
        a(i, LocalIndex(members, w)) = 1.0;
        m &= m - 1;
      }
    }
    return JacobiEigen(std::move(a), false).eigenvalues.front();
  }

  // Restricted operator over a densely re-indexed adjacency list.
  std::vector<std::size_t> row_start(order + 1, 0);
  std::vector<std::uint32_t> cols;
  cols.reserve(2 * edges);
  for (std::size_t i = 0; i < order; ++i) {
    DirectionMask m = g.mask(members[i]);
    while (m != 0) {
      const Vertex w = members[i] ^ (Vertex{1} << std::countr_zero(m));
      cols.push_back(static_cast<std::uint32_t>(LocalIndex(members, w)));
      m &= m - 1;
    }
    row_start[i + 1] = cols.size();
  }
  SymmetricOperator op{
      order, [&](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < order; ++i) {
          double acc = 0.0;
          for (std::size_t e = row_start[i]; e < row_start[i + 1]; ++e) {
            acc += x[cols[e]];
          }
          y[i] = acc;
        }
      }};
  SolverConfig local = config;
  local.want_vector = false;
  return LanczosLargest(op, local).lambda1;
}

std::vector<double> PerComponentLambda1(const HypercubeSubgraph& g,
                                        const ComponentCensus& census,
                                        const SolverConfig& config) {
  std::vector<double> out(census.size());
  for (std::size_t c = 0; c < census.size(); ++c) {
    out[c] = ComponentLambda1(g, census.members(c), census.edges[c], config);
  }
  return out;
}

double ExpectedYkUpper(int n, double p, int k) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "n must be positive");
  if (k < 0) Fail(ErrorCode::kOutOfRange, "k must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "probability outside [0, 1]");
  }
  if (k == 0) return std::ldexp(1.0, n);
  if (p == 0.0) return 0.0;
  double log_value = n * std::log(2.0) + k * (std::log(n) + std::log(p));
  for (int t = 2; t <= k; ++t) log_value += std::log(static_cast<double>(t));
  return std::exp(log_value);
}

bool IsStar(const HypercubeSubgraph& g, std::span<const Vertex> members,
            std::uint64_t edges) {
  if (members.size() != edges + 1) return false;
  if (edges == 0) return true;
  std::size_t centres = 0;
  for (Vertex v : members) {
    const std::uint64_t d = static_cast<std::uint64_t>(g.degree_unchecked(v));
    if (d == edges) {
      ++centres;
    } else if (d != 1) {
      return false;
    }
  }
  // A single edge has two endpoints of degree k = 1.
  return edges == 1 ? centres == 2 : centres == 1;
}

Case4ShapeReport Case4ShapeCheck(const HypercubeSubgraph& g,
                                 const ComponentCensus& census, double lambda1,
                                 const SolverConfig& config) {
  return Case4ShapeCheck(g, census, lambda1,
                         PerComponentLambda1(g, census, config));
}

Case4ShapeReport Case4ShapeCheck(const HypercubeSubgraph& g,
                                 const ComponentCensus& census, double lambda1,
                                 std::span<const double> lambdas) {
  Case4ShapeReport r;
  r.lambda1 = lambda1;
  r.max_degree = MaxDegree(g);
  r.largest_component_edges = census.largest_component_edges;
  const double sq = lambda1 * lambda1;
  r.lambda_sq_matches =
      std::abs(sq - r.max_degree) <= kCase4ShapeTolerance ||
      std::abs(sq - (r.max_degree + 1)) <= kCase4ShapeTolerance;

  for (std::size_t c = 1; c < lambdas.size(); ++c) {
    if (lambdas[c] > lambdas[r.achieving_component]) r.achieving_component = c;
  }
  if (census.size() > 0) {
    r.achieving_is_star =
        IsStar(g, census.members(r.achieving_component),
               census.edges[r.achieving_component]);
  }
  return r;
}

ComponentsSummary SummarizeComponents(const HypercubeSubgraph& g, double p,
                                      double lambda1,
                                      const SolverConfig& config) {
  ComponentsSummary s;
  s.census = ConnectedComponents(g);
  s.lambdas = PerComponentLambda1(g, s.census, config);
  std::size_t nontrivial = 0;
  std::size_t stars = 0;
  for (std::size_t c = 0; c < s.census.size(); ++c) {
    if (s.census.edges[c] == 0) continue;
    ++nontrivial;
    if (IsStar(g, s.census.members(c), s.census.edges[c])) ++stars;
  }
  s.star_fraction =
      nontrivial == 0 ? 0.0 : static_cast<double>(stars) / nontrivial;
  if (const auto kappa = Kappa(g.dimension(), p); kappa && *kappa >= 2) {
    s.k0 = *kappa + *kappa / std::log(static_cast<double>(*kappa));
  }
  s.case4 = Case4ShapeCheck(g, s.census, lambda1, s.lambdas);
  return s;
}

}  // namespace cubespec
