#include "cubespec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "cubespec/components.hpp"
#include "cubespec/cube_graph.hpp"
#include "cubespec/error.hpp"
#include "cubespec/locality.hpp"
#include "cubespec/spectral_bounds.hpp"

namespace cubespec {
namespace {

constexpr double kBoundSlack = 1e-9;
constexpr double kUnionSlack = 1e-8;
constexpr double kStarSlack = 1e-10;

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> SplitList(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(Trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

double ParseDouble(std::string_view text, std::string_view what) {
  const std::string s(Trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "invalid number for " + std::string(what) + ": '" + s + "'");
  }
  return v;
}

// Accepts "a/b" as well as plain decimals.
double ParseFraction(std::string_view text, std::string_view what) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return ParseDouble(text, what);
  const double num = ParseDouble(text.substr(0, slash), what);
  const double den = ParseDouble(text.substr(slash + 1), what);
  if (den == 0.0) Fail(ErrorCode::kInvalidArgument, "zero denominator");
  return num / den;
}

template <typename Int>
Int ParseInt(std::string_view text, std::string_view what) {
  text = Trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "invalid integer for " + std::string(what) + ": '" +
             std::string(text) + "'");
  }
  return v;
}

bool ParseBool(std::string_view text, std::string_view what) {
  text = Trim(text);
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  Fail(ErrorCode::kInvalidArgument,
       "invalid flag for " + std::string(what) + ": '" + std::string(text) + "'");
}

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// handled by exactly one worker; the first exception is rethrown.
template <typename Body>
void ParallelFor(std::size_t count, int threads, Body body) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1, threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Task {
  int n;
  std::size_t rule;
  double p;
  std::uint64_t trial;
};

std::vector<Task> EnumerateTasks(const ExperimentConfig& config) {
  std::vector<Task> tasks;
  for (int n : config.n_values) {
    for (std::size_t r = 0; r < config.p_rules.size(); ++r) {
      const double p = config.p_rules[r].Evaluate(n);
      for (int t = 0; t < config.trials; ++t) {
        tasks.push_back({n, r, p, static_cast<std::uint64_t>(t)});
      }
    }
  }
  return tasks;
}

std::string Describe(int n, double p, std::uint64_t trial) {
  return "n=" + std::to_string(n) + " p=" + FormatReal(p) +
         " trial=" + std::to_string(trial);
}

}  // namespace

std::string FormatReal(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Probability rules

PRule PRule::Constant(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "probability outside [0, 1]");
  }
  return PRule(Kind::kConst, p, "const:" + FormatReal(p));
}

PRule PRule::Parse(std::string_view text) {
  text = Trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    PRule r = Constant(ParseDouble(text, "p"));
    r.label_ = std::string(text);
    return r;
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view arg = Trim(text.substr(colon + 1));
  if (kind == "const") {
    PRule r = Constant(ParseDouble(arg, "p"));
    r.label_ = std::string(text);
    return r;
  }
  if (kind == "pow") {
    const double e = ParseFraction(arg, "pow exponent");
    if (e > 0.0) Fail(ErrorCode::kInvalidArgument, "pow exponent must be <= 0");
    return PRule(Kind::kPow, e, std::string(text));
  }
  if (kind == "pow2") {
    const double e = ParseFraction(arg, "pow2 exponent");
    if (e > 0.0) Fail(ErrorCode::kInvalidArgument, "pow2 exponent must be <= 0");
    return PRule(Kind::kPow2, e, std::string(text));
  }
  if (kind == "sparse") {
    std::string_view k = arg;
    // Long form 2^{-n/k}/n.
    if (k.starts_with("2^{-n/") && k.ends_with("}/n")) {
      k = k.substr(6, k.size() - 6 - 3);
    }
    const int kk = ParseInt<int>(k, "sparse k");
    if (kk < 1) Fail(ErrorCode::kInvalidArgument, "sparse k must be >= 1");
    return PRule(Kind::kSparse, kk, std::string(text));
  }
  Fail(ErrorCode::kInvalidArgument, "unknown p-rule '" + std::string(text) + "'");
}

double PRule::Evaluate(int n) const {
  switch (kind_) {
    case Kind::kConst:
      return value_;
    case Kind::kPow:
      return std::pow(static_cast<double>(n), value_);
    case Kind::kPow2:
      return std::exp2(value_);
    case Kind::kSparse:
      return std::exp2(-static_cast<double>(n) / value_) / n;
  }
  return value_;
}

std::string_view FormatName(RecordFormat f) {
  return f == RecordFormat::kJson ? "json" : "csv";
}

RecordFormat ParseFormat(std::string_view text) {
  text = Trim(text);
  if (text == "csv") return RecordFormat::kCsv;
  if (text == "json") return RecordFormat::kJson;
  Fail(ErrorCode::kInvalidArgument, "format must be csv or json");
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::Validate() const {
  if (n_values.empty()) Fail(ErrorCode::kInvalidArgument, "empty n grid");
  if (p_rules.empty()) Fail(ErrorCode::kInvalidArgument, "empty p grid");
  if (trials < 1) Fail(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (threads < 1) Fail(ErrorCode::kInvalidArgument, "threads must be >= 1");
  for (int n : n_values) CheckDimension(n);
  for (int n : n_values) {
    for (const PRule& r : p_rules) {
      const double p = r.Evaluate(n);
      if (!(p >= 0.0 && p <= 1.0)) {
        Fail(ErrorCode::kInvalidArgument,
             "rule " + r.label() + " gives p outside [0, 1] at n=" +
                 std::to_string(n));
      }
    }
  }
  if (!(solver.tol > 0.0) || solver.max_iter < 1) {
    Fail(ErrorCode::kInvalidArgument, "invalid solver settings");
  }
}

void ApplyConfigValue(ExperimentConfig& c, std::string_view key,
                      std::string_view value) {
  key = Trim(key);
  value = Trim(value);
  if (key == "n") {
    c.n_values.clear();
    for (auto item : SplitList(value, ',')) {
      c.n_values.push_back(ParseInt<int>(item, "n"));
    }
  } else if (key == "p") {
    c.p_rules.clear();
    for (auto item : SplitList(value, ',')) c.p_rules.push_back(PRule::Parse(item));
  } else if (key == "trials") {
    c.trials = ParseInt<int>(value, key);
  } else if (key == "seed") {
    c.master_seed = ParseInt<std::uint64_t>(value, key);
  } else if (key == "tol") {
    c.solver.tol = ParseDouble(value, key);
  } else if (key == "max_iter") {
    c.solver.max_iter = ParseInt<int>(value, key);
  } else if (key == "max_basis") {
    c.solver.max_basis = ParseInt<int>(value, key);
  } else if (key == "start_seed") {
    c.solver.start_seed = ParseInt<std::uint64_t>(value, key);
  } else if (key == "reorthogonalize") {
    c.solver.reorthogonalize = ParseBool(value, key);
  } else if (key == "census") {
    c.census = ParseBool(value, key);
  } else if (key == "locality") {
    c.locality.clear();
    if (value.empty()) return;
    for (auto item : SplitList(value, ',')) {
      const auto parts = SplitList(item, ':');
      if (parts.size() != 2) {
        Fail(ErrorCode::kInvalidArgument, "locality entries are a:b");
      }
      c.locality.push_back(
          {ParseFraction(parts[0], "a"), ParseFraction(parts[1], "b")});
    }
  } else if (key == "format") {
    c.format = ParseFormat(value);
  } else if (key == "threads") {
    c.threads = ParseInt<int>(value, key);
  } else if (key == "out") {
    c.output_path = std::string(value);
  } else if (key == "plot") {
    c.plot_path = std::string(value);
  } else {
    Fail(ErrorCode::kInvalidArgument, "unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig ParseConfig(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) {
      s = s.substr(0, hash);
    }
    s = Trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      Fail(ErrorCode::kParse,
           "config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      ApplyConfigValue(c, s.substr(0, eq), s.substr(eq + 1));
    } catch (const Error& e) {
      Fail(ErrorCode::kParse,
           "config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig ParseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config " + path);
  return ParseConfig(in);
}

// ---------------------------------------------------------------------------
// Trials

TrialRecord RunTrial(int n, double p, std::uint64_t trial_index,
                     const ExperimentConfig& config) {
  const SampleParams params{n, p, config.master_seed, trial_index};
  const HypercubeSubgraph g = SampleSubgraph(params);

  TrialRecord r;
  r.n = n;
  r.p = p;
  r.trial_index = trial_index;
  r.derived_seed = DeriveTrialSeed(params);
  r.m = g.edge_count();
  r.delta = MaxDegree(g);
  r.kappa = Kappa(n, p);
  r.regime = ClassifyRegime(n, p);

  SolverConfig solver = config.solver;
  solver.want_vector = false;
  const SpectralResult s = LanczosLambda1(g, solver);
  r.lambda1 = s.lambda1;
  r.iterations = s.iterations;
  r.residual = s.residual;
  r.converged = s.converged;
  r.prediction = TheoremPrediction(r.delta, n, p);
  if (r.prediction > 0.0) r.ratio = r.lambda1 / r.prediction;

  if (config.census) {
    const ComponentCensus census = ConnectedComponents(g);
    r.largest_component_edges = census.largest_component_edges;
    r.case4_shape =
        Case4ShapeCheck(g, census, r.lambda1, solver).lambda_sq_matches;
  }
  return r;
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const std::vector<Task> tasks = EnumerateTasks(config);
  ExperimentResult out;
  out.records.resize(tasks.size());
  std::vector<std::vector<LocalityRecord>> locality(tasks.size());

  ParallelFor(tasks.size(), config.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    out.records[i] = RunTrial(t.n, t.p, t.trial, config);
    if (!config.locality.empty()) {
      // Resampling is deterministic and cheaper than keeping every graph.
      const HypercubeSubgraph g =
          SampleSubgraph({t.n, t.p, config.master_seed, t.trial});
      for (const LocalityQuery& q : config.locality) {
        const LocalityReport rep = HighDegreeClusterStat(g, t.p, q.a, q.b);
        locality[i].push_back({t.n, t.p, t.trial, q.a, q.b, rep.threshold,
                               rep.max_cluster, rep.conclusion_holds});
      }
    }
  });

  out.series.reserve(tasks.size());
  for (const Task& t : tasks) out.series.push_back(config.p_rules[t.rule].label());
  for (auto& rows : locality) {
    out.locality.insert(out.locality.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<std::string> CheckRecord(const TrialRecord& r, double tol) {
  std::vector<std::string> problems;
  const std::string where = Describe(r.n, r.p, r.trial_index);
  const double avg = std::ldexp(static_cast<double>(2 * r.m), -r.n);
  const double lower = std::max(std::sqrt(static_cast<double>(r.delta)), avg);
  if (r.lambda1 < lower - kBoundSlack) {
    problems.push_back(where + ": lambda1 below max(sqrt(delta), 2m/2^n)");
  }
  if (r.lambda1 > r.delta + kBoundSlack) {
    problems.push_back(where + ": lambda1 above delta");
  }
  if (r.ratio && *r.ratio < avg / r.prediction - kBoundSlack) {
    problems.push_back(where + ": ratio below average-degree floor");
  }
  if (r.converged && r.residual > tol * std::max(1.0, r.lambda1)) {
    problems.push_back(where + ": converged with residual above tolerance");
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Summaries

std::vector<SummaryRow> Summarize(std::span<const TrialRecord> records) {
  if (records.empty()) Fail(ErrorCode::kInvalidArgument, "no records to summarize");
  std::map<std::pair<int, double>, std::vector<const TrialRecord*>> groups;
  for (const TrialRecord& r : records) groups[{r.n, r.p}].push_back(&r);

  std::vector<SummaryRow> rows;
  for (const auto& [key, group] : groups) {
    SummaryRow row;
    row.n = key.first;
    row.p = key.second;
    row.trials = group.size();
    row.predicted_delta = PredictedMaxDegree(row.n, row.p).range;
    std::vector<double> ratios;
    std::size_t converged = 0;
    for (const TrialRecord* r : group) {
      if (r->ratio) ratios.push_back(*r->ratio);
      converged += r->converged;
      row.delta_in_range += row.predicted_delta.Contains(r->delta);
    }
    row.ratio_count = ratios.size();
    if (!ratios.empty()) {
      std::sort(ratios.begin(), ratios.end());
      const std::size_t k = ratios.size();
      row.ratio_median = (k % 2 == 1)
                             ? ratios[k / 2]
                             : 0.5 * (ratios[k / 2 - 1] + ratios[k / 2]);
      double sum = 0.0;
      for (double x : ratios) sum += x;
      row.ratio_mean = sum / static_cast<double>(k);
      row.ratio_min = ratios.front();
      row.ratio_max = ratios.back();
    }
    row.delta_in_range_freq =
        static_cast<double>(row.delta_in_range) / static_cast<double>(row.trials);
    row.convergence_rate =
        static_cast<double>(converged) / static_cast<double>(row.trials);
    rows.push_back(row);
  }
  return rows;
}

void WriteSummary(std::span<const SummaryRow> rows, std::ostream& out) {
  out << "n,p,trials,ratio_count,ratio_median,ratio_mean,ratio_min,ratio_max,"
         "delta_lo,delta_hi,delta_in_range_freq,convergence_rate\n";
  for (const SummaryRow& r : rows) {
    out << r.n << ',' << FormatReal(r.p) << ',' << r.trials << ','
        << r.ratio_count << ',';
    if (r.ratio_count > 0) {
      out << FormatReal(r.ratio_median) << ',' << FormatReal(r.ratio_mean) << ','
          << FormatReal(r.ratio_min) << ',' << FormatReal(r.ratio_max) << ',';
    } else {
      out << ",,,,";
    }
    out << r.predicted_delta.lo << ',' << r.predicted_delta.hi << ','
        << FormatReal(r.delta_in_range_freq) << ','
        << FormatReal(r.convergence_rate) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Invariant suite

VerifyReport RunVerification(const ExperimentConfig& config) {
  config.Validate();
  const std::vector<Task> tasks = EnumerateTasks(config);
  std::vector<std::vector<std::string>> found(tasks.size());
  std::vector<std::uint64_t> checks(tasks.size(), 0);

  ParallelFor(tasks.size(), config.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    auto& bad = found[i];
    std::uint64_t& count = checks[i];
    const std::string where = Describe(t.n, t.p, t.trial);
    auto expect = [&](bool ok, const std::string& what) {
      ++count;
      if (!ok) bad.push_back(where + ": " + what);
    };

    const HypercubeSubgraph g =
        SampleSubgraph({t.n, t.p, config.master_seed, t.trial});

    std::uint64_t degree_sum = 0;
    bool symmetric = true;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      degree_sum += g.degree_unchecked(v);
      for (int d = 0; d < t.n; ++d) {
        symmetric &= g.has_edge(v, d) == g.has_edge(v ^ (Vertex{1} << d), d);
      }
    }
    expect(symmetric, "mask symmetry");
    expect(degree_sum == 2 * g.edge_count(), "edge count equals half degree sum");

    SolverConfig solver = config.solver;
    solver.want_vector = true;
    const SpectralResult s = LanczosLambda1(g, solver);
    const double lambda = s.lambda1;
    if (s.converged) {
      const double r = ResidualNorm(g, *s.vector, lambda);
      expect(r <= solver.tol * std::max(1.0, lambda), "residual contract");
    }

    const BoundReport b = ComputeBoundReport(g, t.p);
    const Sandwich sw = SandwichBounds(g);
    expect(lambda >= sw.lower - kBoundSlack, "lower sandwich bound");
    expect(lambda <= sw.upper + kBoundSlack, "upper sandwich bound");
    expect(lambda <= b.walk2_bound + kBoundSlack, "walk-2 bound");
    expect(lambda <= b.sqrt_edges + kBoundSlack, "sqrt(m) bound");
    expect(lambda <= b.parity_product_bound + kBoundSlack,
           "bipartite product bound");

    if (t.n <= 4) {
      const std::vector<double> spectrum = DenseSpectrum(g);
      expect(std::abs(lambda - spectrum.front()) <= 1e-8,
             "Lanczos matches dense spectrum");
    }

    if (config.census) {
      const ComponentCensus census = ConnectedComponents(g);
      std::uint64_t edge_sum = 0;
      std::size_t covered = 0;
      for (std::size_t c = 0; c < census.size(); ++c) {
        edge_sum += census.edges[c];
        covered += census.members(c).size();
      }
      expect(edge_sum == g.edge_count(), "component edges sum to m");
      expect(covered == g.vertex_count(), "components partition vertices");
      const std::vector<double> lambdas = PerComponentLambda1(g, census, solver);
      double best = 0.0;
      for (double x : lambdas) best = std::max(best, x);
      expect(std::abs(best - lambda) <= kUnionSlack, "disjoint-union max law");
      for (std::size_t c = 0; c < census.size(); ++c) {
        const double root_k = std::sqrt(static_cast<double>(census.edges[c]));
        expect(lambdas[c] <= root_k + kBoundSlack, "component sqrt(k) bound");
        if (IsStar(g, census.members(c), census.edges[c])) {
          expect(std::abs(lambdas[c] - root_k) <= kStarSlack,
                 "star component has lambda1 = sqrt(k)");
        }
      }
    }
  });

  VerifyReport rep;
  rep.graphs = tasks.size();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    rep.checks += checks[i];
    rep.violations.insert(rep.violations.end(), found[i].begin(), found[i].end());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tail tables

std::vector<TailRow> TailsTable(int n, double p, int trials,
                                std::uint64_t master_seed, int threads) {
  CheckDimension(n);
  if (trials < 1) Fail(ErrorCode::kInvalidArgument, "trials must be >= 1");
  std::vector<int> deltas(static_cast<std::size_t>(trials));
  ParallelFor(deltas.size(), threads, [&](std::size_t t) {
    deltas[t] = MaxDegree(SampleSubgraph({n, p, master_seed, t}));
  });
  std::vector<TailRow> rows;
  for (int k = 1; k <= n; ++k) {
    TailRow row;
    row.k = k;
    row.bound_lt = ProbMaxDegreeLt(n, p, k);
    row.bound_ge = ProbMaxDegreeGe(n, p, k);
    const auto below = std::count_if(deltas.begin(), deltas.end(),
                                     [k](int d) { return d < k; });
    row.mc_lt = static_cast<double>(below) / trials;
    row.mc_ge = 1.0 - row.mc_lt;
    row.trials = static_cast<std::uint64_t>(trials);
    rows.push_back(row);
  }
  return rows;
}

void WriteTails(std::span<const TailRow> rows, std::ostream& out) {
  out << "k,bound_lt,bound_ge,mc_lt,mc_ge,trials\n";
  for (const TailRow& r : rows) {
    out << r.k << ',' << FormatReal(r.bound_lt) << ',' << FormatReal(r.bound_ge)
        << ',' << FormatReal(r.mc_lt) << ',' << FormatReal(r.mc_ge) << ','
        << r.trials << '\n';
  }
}

}  // namespace cubespec
