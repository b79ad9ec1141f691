// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cubespec/components.hpp"
#include "cubespec/cube_graph.hpp"
#include "cubespec/degree_theory.hpp"
#include "cubespec/eigensolve.hpp"
#include "cubespec/experiment.hpp"
#include "cubespec/spectral_bounds.hpp"
#include "thresholds.hpp"

using namespace cubespec;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

int Workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];

template <typename... Args>
std::string Format(const char* fmt, Args... args) {
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Larger of the empirical and the at-the-bound binomial standard error; the
// empirical one alone collapses to zero when a frequency is exactly 0 or 1.
double StandardError(double freq, double bound, std::uint64_t trials) {
  const double b = std::clamp(bound, 0.0, 1.0);
  return std::sqrt(std::max(freq * (1 - freq), b * (1 - b)) / static_cast<double>(trials));
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Sampled graphs for criteria 2-4: every n in 2..16 with one probability per
// regime, each drawn 17 times.
struct SuiteGraph {
  int n;
  double p;
  Regime regime;
  HypercubeSubgraph graph;
};

std::vector<double> RegimeProbes(int n) {
  const double ln = std::log(static_cast<double>(n));
  const double floor = std::exp(-std::pow(ln, 4));
  const double lo = std::pow(n, -2.0 / 3);
  const double hi = std::pow(n, -4.0 / 9);
  return {floor / 2,                              // below the floor
          std::sqrt(std::max(floor, 1e-300) * lo),  // between floor and n^(-2/3)
          std::pow(n, -0.55),                     // between the two powers
          0.5 * (hi + 1.0)};                      // above n^(-4/9)
}

const std::vector<SuiteGraph>& Suite() {
  static const std::vector<SuiteGraph> suite = [] {
    std::vector<SuiteGraph> out;
    for (int n = 2; n <= 16; ++n) {
      for (double p : RegimeProbes(n)) {
        for (std::uint64_t t = 0; t < 17; ++t) {
          out.push_back({n, p, ClassifyRegime(n, p), SampleSubgraph({n, p, 0xacce55, t})});
        }
      }
    }
    return out;
  }();
  return suite;
}

Outcome OracleEquivalence() {
  const auto start = Clock::now();
  int instances = 0;
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    for (double p : {0.2, 0.5, 0.8}) {
      for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto g = SampleSubgraph({n, p, seed, 0});
        const double dense = DenseSpectrum(g).front();
        worst = std::max(worst, std::abs(LanczosLambda1(g).lambda1 - dense));
        ++instances;
      }
    }
  }
  const double secs = Seconds(start);
  return {worst <= thresholds::kOracleTolerance && secs < thresholds::kOracleSeconds,
          Format("%d instances, max |diff| = %.3g, %.2f s", instances, worst, secs)};
}

Outcome SandwichSuite() {
  std::size_t violations = 0;
  bool regimes[5] = {};
  for (const auto& s : Suite()) {
    regimes[static_cast<int>(s.regime)] = true;
    const double l = LanczosLambda1(s.graph).lambda1;
    const auto b = SandwichBounds(s.graph);
    violations += l < b.lower - thresholds::kBoundSlack || l > b.upper + thresholds::kBoundSlack;
  }
  const bool all = regimes[1] && regimes[2] && regimes[3] && regimes[4];
  return {violations == 0 && all && Suite().size() >= 1000,
          Format("%zu graphs, %zu violations, all four regimes %s", Suite().size(), violations,
                 all ? "covered" : "NOT covered")};
}

Outcome WalkBound() {
  std::size_t violations = 0;
  std::size_t brute_checked = 0;
  std::size_t brute_mismatch = 0;
  for (const auto& s : Suite()) {
    const double l = LanczosLambda1(s.graph).lambda1;
    violations += l > std::sqrt(static_cast<double>(Walk2Max(s.graph))) + thresholds::kBoundSlack;
    if (s.n > 6) continue;
    // Walks v -> u -> w enumerated over all vertex triples.
    const auto N = static_cast<Vertex>(s.graph.vertex_count());
    auto adjacent = [&](Vertex a, Vertex b) {
      const Vertex d = a ^ b;
      return std::popcount(d) == 1 && s.graph.has_edge(a, std::countr_zero(d));
    };
    for (Vertex v = 0; v < N; ++v) {
      std::uint64_t walks = 0;
      for (Vertex u = 0; u < N; ++u) {
        if (!adjacent(v, u)) continue;
        for (Vertex w = 0; w < N; ++w) walks += adjacent(u, w);
      }
      brute_mismatch += walks != Walk2(s.graph, v);
      ++brute_checked;
    }
  }
  return {violations == 0 && brute_mismatch == 0,
          Format("%zu violations; %zu vertices brute-forced, %zu mismatches", violations,
                 brute_checked, brute_mismatch)};
}

Outcome DisjointUnion() {
  std::size_t sparse = 0;
  std::size_t union_bad = 0;
  std::size_t stars = 0;
  std::size_t star_bad = 0;
  for (const auto& s : Suite()) {
    if (s.regime != Regime::kCase1 && s.regime != Regime::kCase4) continue;
    ++sparse;
    const double global = LanczosLambda1(s.graph).lambda1;
    const auto census = ConnectedComponents(s.graph);
    const auto lambdas = PerComponentLambda1(s.graph, census);
    const double best = lambdas.empty() ? 0.0 : *std::max_element(lambdas.begin(), lambdas.end());
    union_bad += std::abs(global - best) > thresholds::kUnionTolerance;
    for (std::size_t c = 0; c < census.size(); ++c) {
      if (census.edges[c] == 0 || !IsStar(s.graph, census.members(c), census.edges[c])) continue;
      ++stars;
      star_bad += std::abs(lambdas[c] - std::sqrt(static_cast<double>(census.edges[c]))) >
                  thresholds::kStarTolerance;
    }
  }
  return {sparse > 0 && union_bad == 0 && star_bad == 0,
          Format("%zu sparse graphs, %zu union mismatches; %zu stars, %zu off sqrt(k)", sparse,
                 union_bad, stars, star_bad)};
}

Outcome FullCube() {
  double worst = 0.0;
  double secs20 = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const auto g = HypercubeSubgraph::FullCube(n);
    const auto start = Clock::now();
    const auto r = LanczosLambda1(g);
    if (n == 20) secs20 = Seconds(start);
    worst = std::max(worst, r.converged ? std::abs(r.lambda1 - n) : INFINITY);
  }
  return {worst <= thresholds::kFullCubeTolerance && secs20 < thresholds::kFullCubeSeconds,
          Format("max |lambda1 - n| = %.3g over n = 1..20, n = 20 solve %.2f s", worst, secs20)};
}

ExperimentConfig Grid(std::vector<int> ns, const std::string& p, int trials, bool census) {
  ExperimentConfig c;
  c.n_values = std::move(ns);
  c.p_rules = {PRule::Parse(p)};
  c.trials = trials;
  c.master_seed = 0x5eedacce;
  c.census = census;
  c.threads = Workers();
  return c;
}

Outcome MaxDegreeLaw() {
  const auto window = PredictedMaxDegree(20, 0.1).range;
  // Same trial graphs as a `run` over this grid; only the degree is needed.
  const ExperimentConfig c = Grid({20}, "0.1", 50, false);
  std::vector<int> deltas(static_cast<std::size_t>(c.trials));
  for (int t = 0; t < c.trials; ++t) {
    deltas[t] = MaxDegree(SampleSubgraph({20, 0.1, c.master_seed, static_cast<std::uint64_t>(t)}));
  }
  std::size_t inside = 0;
  for (int d : deltas) inside += window.Contains(d);
  const double freq = static_cast<double>(inside) / deltas.size();
  return {freq >= thresholds::kMaxDegreeWindowFloor && window == DegreeInterval{9, 11},
          Format("kappa = %d, window [%d, %d], %zu/%zu trials inside (%.2f, floor %.2f)",
                 Kappa(20, 0.1).value_or(-1), window.lo, window.hi, inside, deltas.size(), freq,
                 thresholds::kMaxDegreeWindowFloor)};
}

Outcome TailBounds() {
  const auto rows = TailsTable(10, 0.1, 500, 0x7a11, Workers());
  std::size_t bad = 0;
  for (const auto& r : rows) {
    const double se_lt = StandardError(r.mc_lt, r.bound_lt, r.trials);
    const double se_ge = StandardError(r.mc_ge, r.bound_ge, r.trials);
    bad += r.mc_lt > r.bound_lt + thresholds::kTailStandardErrors * se_lt;
    bad += r.mc_ge > r.bound_ge + thresholds::kTailStandardErrors * se_ge;
  }
  return {bad == 0 && rows.size() == 10,
          Format("k = 1..%zu, 500 trials, %zu bound violations", rows.size(), bad)};
}

Outcome Trend() {
  const auto records = RunExperiment(Grid({8, 12, 16, 20}, "0.5", 20, false)).records;
  std::size_t outside = 0;
  std::vector<double> medians;
  for (int n : {8, 12, 16, 20}) {
    std::vector<double> ratios;
    for (const auto& r : records) {
      if (r.n != n) continue;
      const double ratio = r.ratio.value_or(NAN);
      outside += !(ratio >= thresholds::kRatioLow && ratio <= thresholds::kRatioHigh);
      ratios.push_back(ratio);
    }
    medians.push_back(Median(ratios));
  }
  const bool monotone = std::is_sorted(medians.rbegin(), medians.rend());
  return {outside == 0 && monotone,
          Format("medians %.4f %.4f %.4f %.4f (%s), %zu ratios outside [%.2f, %.2f]", medians[0],
                 medians[1], medians[2], medians[3], monotone ? "non-increasing" : "INCREASING",
                 outside, thresholds::kRatioLow, thresholds::kRatioHigh)};
}

Outcome SparseShape() {
  const double p = std::ldexp(1.0, -13);
  const auto records = RunExperiment(Grid({16}, "pow2:-13", 100, true)).records;
  std::size_t small = 0;
  std::size_t shape = 0;
  for (const auto& r : records) {
    small += r.largest_component_edges.value_or(~0ull) <= thresholds::kSmallComponentEdges;
    shape += r.case4_shape.value_or(false);
  }
  const double fs = static_cast<double>(small) / records.size();
  const double fl = static_cast<double>(shape) / records.size();
  return {fs >= thresholds::kSmallComponentFloor && fl >= thresholds::kStarShapeFloor,
          Format("regime %s; largest <= %u edges in %.2f (floor %.2f); lambda1^2 in {D, D+1} in "
                 "%.2f (floor %.2f)",
                 std::string(RegimeName(ClassifyRegime(16, p))).c_str(),
                 thresholds::kSmallComponentEdges, fs, thresholds::kSmallComponentFloor, fl,
                 thresholds::kStarShapeFloor)};
}

Outcome Determinism() {
  ExperimentConfig c;
  c.n_values = {6, 10, 14};
  c.p_rules = {PRule::Parse("0.5"), PRule::Parse("pow:-2/3"), PRule::Parse("pow2:-9")};
  c.trials = 6;
  c.master_seed = 42;
  c.census = true;
  auto render = [](const ExperimentConfig& cfg) {
    const auto res = RunExperiment(cfg);
    std::ostringstream csv;
    std::ostringstream svg;
    WriteRecords(res.records, csv, RecordFormat::kCsv);
    PlotRatio(res.records, res.series, svg);
    return std::pair{csv.str(), svg.str()};
  };
  const auto a = render(c);
  const auto b = render(c);
  c.threads = 4;
  const auto d = render(c);
  const bool same = a == b && a == d;
  return {same, Format("csv %zu bytes, svg %zu bytes; repeat %s, threads 1 vs 4 %s", a.first.size(),
                       a.second.size(), a == b ? "identical" : "DIFFERENT",
                       a == d ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "oracle equivalence", OracleEquivalence},
      {2, "sandwich bounds", SandwichSuite},
      {3, "two-step walk bound", WalkBound},
      {4, "disjoint-union law", DisjointUnion},
      {5, "full cube", FullCube},
      {6, "maximum-degree window", MaxDegreeLaw},
      {7, "maximum-degree tail bounds", TailBounds},
      {8, "ratio trend at p = 1/2", Trend},
      {9, "sparse component shape", SparseShape},
      {10, "determinism", Determinism},
  };
  std::printf("acceptance thresholds version %d\n", thresholds::kVersion);
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), Seconds(start));
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
