#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cubespec/cubespec.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Failure {
  cubespec_status status;
  std::string message;
};

int ExitCodeFor(cubespec_status s) {
  switch (s) {
    case CUBESPEC_OK:
      return kExitOk;
    case CUBESPEC_INVALID_ARGUMENT:
    case CUBESPEC_OUT_OF_RANGE:
      return kExitUsage;
    default:
      return kExitIo;
  }
}

void Check(cubespec_status s) {
  if (s != CUBESPEC_OK) throw Failure{s, cubespec_last_error()};
}

[[noreturn]] void Usage(const std::string& message) {
  throw Failure{CUBESPEC_INVALID_ARGUMENT, message};
}

struct GraphDeleter {
  void operator()(cubespec_graph* g) const { cubespec_graph_free(g); }
};
using GraphPtr = std::unique_ptr<cubespec_graph, GraphDeleter>;

struct ExperimentDeleter {
  void operator()(cubespec_experiment* e) const { cubespec_experiment_free(e); }
};
using ExperimentPtr = std::unique_ptr<cubespec_experiment, ExperimentDeleter>;

// Takes ownership of a malloc'd string from the library.
std::string Adopt(char* s) {
  std::string out(s ? s : "");
  cubespec_string_free(s);
  return out;
}

std::string Real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
  std::string format = "csv";
};

void Emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Failure{CUBESPEC_IO_ERROR, "cannot open " + g.out + " for writing"};
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
  if (!f) throw Failure{CUBESPEC_IO_ERROR, "write failed: " + g.out};
}

struct SampleOptions {
  std::optional<int> n;
  std::optional<double> p;
  std::uint64_t trial = 0;
  std::string edges;
};

void AddSampling(CLI::App* cmd, SampleOptions& s, bool allow_edges) {
  auto* n = cmd->add_option("--n", s.n, "cube dimension");
  auto* trial = cmd->add_option("--trial", s.trial, "trial index");
  cmd->add_option("--p", s.p, "edge probability");
  if (allow_edges) {
    auto* edges = cmd->add_option("--edges", s.edges, "read the graph from an edge-list file");
    edges->excludes(n)->excludes(trial);
  }
}

// Edge-list input carries no probability; the empirical density stands in.
double EffectiveP(const SampleOptions& s, const cubespec_graph* g) {
  if (s.p) return *s.p;
  int n = 0;
  std::uint64_t m = 0;
  Check(cubespec_graph_dimension(g, &n));
  Check(cubespec_graph_edge_count(g, &m));
  return static_cast<double>(m) / (n * std::ldexp(1.0, n - 1));
}

GraphPtr LoadGraph(const SampleOptions& s, const GlobalOptions& g) {
  cubespec_graph* raw = nullptr;
  if (!s.edges.empty()) {
    Check(cubespec_graph_read_edges(s.edges.c_str(), &raw));
  } else {
    if (!s.n) Usage("--n is required (or --edges)");
    if (!s.p) Usage("--p is required (or --edges)");
    Check(cubespec_graph_sample(*s.n, *s.p, g.seed, s.trial, &raw));
  }
  return GraphPtr(raw);
}

struct SolverOptions {
  cubespec_solver_config config;
  SolverOptions() { cubespec_solver_config_init(&config); }
};

void AddSolver(CLI::App* cmd, SolverOptions& s) {
  cmd->add_option("--tol", s.config.tol, "eigensolver tolerance");
  cmd->add_option("--max-iter", s.config.max_iter, "eigensolver iteration cap");
}

struct ExperimentOptions {
  std::string config;
  std::vector<std::string> sets;
  std::string n;
  std::string p;
  std::optional<int> trials;
  std::string plot;
  bool census = false;
};

void AddExperiment(CLI::App* cmd, ExperimentOptions& e) {
  cmd->add_option("--config,-c", e.config, "key=value config file")->check(CLI::ExistingFile);
  cmd->add_option("--set", e.sets, "override one config key (key=value)");
  cmd->add_option("--n", e.n, "comma-separated n values");
  cmd->add_option("--p", e.p, "comma-separated p values or p-rules");
  cmd->add_option("--trials", e.trials, "trials per (n, p)");
  cmd->add_flag("--census", e.census, "record component statistics");
}

void Set(cubespec_experiment* e, const std::string& key, const std::string& value) {
  Check(cubespec_experiment_set(e, key.c_str(), value.c_str()));
}

// File values first, then global flags, then subcommand flags and --set.
ExperimentPtr BuildExperiment(const ExperimentOptions& o, const GlobalOptions& g,
                              CLI::App& app, bool for_verify) {
  cubespec_experiment* raw = nullptr;
  if (!o.config.empty()) {
    Check(cubespec_experiment_load(o.config.c_str(), &raw));
  } else {
    Check(cubespec_experiment_create(&raw));
    if (for_verify) {
      // Default suite: small dimensions across all four regimes.
      Set(raw, "n", "1,2,3,4,6,8,10,12");
      Set(raw, "p", "pow2:-13,pow:-2/3,pow:-4/9,0.5,0.9");
      Set(raw, "trials", "8");
    }
  }
  ExperimentPtr e(raw);
  if (app.count("--seed")) Set(raw, "seed", std::to_string(g.seed));
  if (app.count("--threads")) Set(raw, "threads", std::to_string(g.threads));
  if (!for_verify) {
    if (app.count("--out")) Set(raw, "out", g.out);
    if (app.count("--format")) Set(raw, "format", g.format);
    if (!o.plot.empty()) Set(raw, "plot", o.plot);
  }
  if (!o.n.empty()) Set(raw, "n", o.n);
  if (!o.p.empty()) Set(raw, "p", o.p);
  if (o.trials) Set(raw, "trials", std::to_string(*o.trials));
  if (o.census) Set(raw, "census", "true");
  for (const std::string& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) Usage("--set expects key=value, got '" + kv + "'");
    Set(raw, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of random subgraphs of the hypercube"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "master seed");
  app.add_option("--threads", global.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out,-o", global.out, "output path (default: stdout)");
  app.add_option("--format", global.format, "record format")
      ->check(CLI::IsMember({"csv", "json"}));

  SampleOptions sample;
  SolverOptions solver;
  std::string emit_vector;
  std::string mode = "i";
  double a = 0.0;
  std::optional<double> b;
  std::int64_t locality_sample = 0;
  int tail_trials = 500;
  std::string input;
  ExperimentOptions experiment;
  std::string edges_out;

  auto* cmd_sample = app.add_subcommand("sample", "draw one random subgraph");
  AddSampling(cmd_sample, sample, false);
  cmd_sample->add_option("--edges-out", edges_out, "write the edge list here");

  auto* cmd_eig = app.add_subcommand("eig", "largest adjacency eigenvalue");
  AddSampling(cmd_eig, sample, true);
  AddSolver(cmd_eig, solver);
  cmd_eig->add_option("--emit-vector", emit_vector, "write the unit eigenvector");

  auto* cmd_bounds = app.add_subcommand("bounds", "eigenvalue bounds report");
  AddSampling(cmd_bounds, sample, true);
  AddSolver(cmd_bounds, solver);

  auto* cmd_kappa = app.add_subcommand("kappa", "extreme-degree profile");
  cmd_kappa->add_option("--n", sample.n, "cube dimension")->required();
  cmd_kappa->add_option("--p", sample.p, "edge probability")->required();

  auto* cmd_tails = app.add_subcommand("tails", "max-degree tail bounds vs Monte Carlo");
  cmd_tails->add_option("--n", sample.n, "cube dimension")->required();
  cmd_tails->add_option("--p", sample.p, "edge probability")->required();
  cmd_tails->add_option("--trials", tail_trials, "Monte Carlo trials")->check(CLI::PositiveNumber);

  auto* cmd_components = app.add_subcommand("components", "component census");
  AddSampling(cmd_components, sample, true);
  AddSolver(cmd_components, solver);

  auto* cmd_locality = app.add_subcommand("locality", "high-degree clustering statistics");
  AddSampling(cmd_locality, sample, true);
  cmd_locality->add_option("--mode", mode, "i: degree >= n^b; ii: above mean")
      ->check(CLI::IsMember({"i", "ii"}));
  cmd_locality->add_option("--a", a, "cluster exponent")->required();
  cmd_locality->add_option("--b", b, "degree exponent (mode i)");
  cmd_locality->add_option("--sample", locality_sample, "scan this many random vertices");

  auto* cmd_run = app.add_subcommand("run", "Monte Carlo experiment");
  AddExperiment(cmd_run, experiment);
  cmd_run->add_option("--plot", experiment.plot, "also write an SVG ratio plot");

  auto* cmd_verify = app.add_subcommand("verify", "invariant suite");
  AddExperiment(cmd_verify, experiment);

  auto* cmd_summarize = app.add_subcommand("summarize", "summary of a records file");
  cmd_summarize->add_option("--in,-i", input, "records file")->required();

  auto* cmd_plot = app.add_subcommand("plot", "SVG ratio plot of a records file");
  cmd_plot->add_option("--in,-i", input, "records file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_sample->parsed()) {
      const GraphPtr g = LoadGraph(sample, global);
      if (!edges_out.empty()) Check(cubespec_graph_write_edges(g.get(), edges_out.c_str()));
      char* json = nullptr;
      Check(cubespec_graph_info_json(g.get(), &json));
      Emit(global, Adopt(json));
    } else if (cmd_eig->parsed()) {
      const GraphPtr g = LoadGraph(sample, global);
      int n = 0;
      Check(cubespec_graph_dimension(g.get(), &n));
      std::vector<double> vec;
      if (!emit_vector.empty()) vec.resize(std::size_t{1} << n);
      cubespec_spectral_result r{};
      Check(cubespec_lambda1(g.get(), &solver.config, &r, vec.empty() ? nullptr : vec.data(),
                             vec.size()));
      if (!emit_vector.empty()) {
        std::ofstream f(emit_vector, std::ios::binary);
        if (!f) throw Failure{CUBESPEC_IO_ERROR, "cannot open " + emit_vector};
        for (double x : vec) f << Real(x) << '\n';
        if (!f) throw Failure{CUBESPEC_IO_ERROR, "write failed: " + emit_vector};
      }
      Emit(global, "{\"lambda1\":" + Real(r.lambda1) +
                       ",\"iterations\":" + std::to_string(r.iterations) +
                       ",\"residual\":" + Real(r.residual) +
                       ",\"converged\":" + (r.converged ? "true" : "false") + "}");
    } else if (cmd_bounds->parsed()) {
      const GraphPtr g = LoadGraph(sample, global);
      char* json = nullptr;
      Check(cubespec_bounds_json(g.get(), EffectiveP(sample, g.get()), &solver.config, &json));
      Emit(global, Adopt(json));
    } else if (cmd_kappa->parsed()) {
      char* json = nullptr;
      Check(cubespec_kappa_json(*sample.n, *sample.p, &json));
      Emit(global, Adopt(json));
    } else if (cmd_tails->parsed()) {
      char* csv = nullptr;
      Check(cubespec_tails_csv(*sample.n, *sample.p, tail_trials, global.seed,
                               global.threads, &csv));
      Emit(global, Adopt(csv));
    } else if (cmd_components->parsed()) {
      const GraphPtr g = LoadGraph(sample, global);
      char* json = nullptr;
      Check(cubespec_components_json(g.get(), EffectiveP(sample, g.get()), &solver.config,
                                     &json));
      Emit(global, Adopt(json));
    } else if (cmd_locality->parsed()) {
      const GraphPtr g = LoadGraph(sample, global);
      cubespec_locality_query q{};
      q.mode = mode == "i" ? CUBESPEC_LOCALITY_HIGH_DEGREE : CUBESPEC_LOCALITY_ABOVE_MEAN;
      if (q.mode == CUBESPEC_LOCALITY_HIGH_DEGREE && !b) Usage("--b is required for mode i");
      q.a = a;
      q.b = b.value_or(0.0);
      q.p = EffectiveP(sample, g.get());
      q.sample_size = locality_sample;
      q.sample_seed = global.seed;
      char* json = nullptr;
      Check(cubespec_locality_json(g.get(), &q, &json));
      Emit(global, Adopt(json));
    } else if (cmd_run->parsed()) {
      const ExperimentPtr e = BuildExperiment(experiment, global, app, false);
      std::size_t violations = 0;
      char* report = nullptr;
      Check(cubespec_experiment_run(e.get(), &violations, &report));
      std::cerr << Adopt(report) << '\n';
      if (violations > 0) return kExitViolation;
    } else if (cmd_verify->parsed()) {
      const ExperimentPtr e = BuildExperiment(experiment, global, app, true);
      std::size_t violations = 0;
      char* report = nullptr;
      Check(cubespec_experiment_verify(e.get(), &violations, &report));
      Emit(global, Adopt(report));
      if (violations > 0) return kExitViolation;
    } else if (cmd_summarize->parsed()) {
      char* csv = nullptr;
      Check(cubespec_summarize_file(input.c_str(), &csv));
      Emit(global, Adopt(csv));
    } else if (cmd_plot->parsed()) {
      if (global.out.empty()) Usage("plot requires --out");
      Check(cubespec_plot_file(input.c_str(), global.out.c_str()));
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return ExitCodeFor(f.status);
  }
  return kExitOk;
}
