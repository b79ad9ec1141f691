#include "cubespec/cubespec.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cubespec/components.hpp"
#include "cubespec/cube_graph.hpp"
#include "cubespec/degree_theory.hpp"
#include "cubespec/eigensolve.hpp"
#include "cubespec/error.hpp"
#include "cubespec/experiment.hpp"
#include "cubespec/locality.hpp"
#include "cubespec/spectral_bounds.hpp"

using cubespec::ErrorCode;
using ordered_json = nlohmann::ordered_json;

struct cubespec_graph {
  cubespec::HypercubeSubgraph graph;
  std::optional<cubespec::SampleParams> sampled_with;
};

struct cubespec_experiment {
  cubespec::ExperimentConfig config;
};

namespace {

thread_local std::string g_last_error;

cubespec_status ToStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return CUBESPEC_INVALID_ARGUMENT;
    case ErrorCode::kOutOfRange:
      return CUBESPEC_OUT_OF_RANGE;
    case ErrorCode::kIo:
      return CUBESPEC_IO_ERROR;
    case ErrorCode::kParse:
      return CUBESPEC_PARSE_ERROR;
    case ErrorCode::kSchema:
      return CUBESPEC_SCHEMA_ERROR;
  }
  return CUBESPEC_INTERNAL_ERROR;
}

template <typename F>
cubespec_status Guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return CUBESPEC_OK;
  } catch (const cubespec::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CUBESPEC_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CUBESPEC_INTERNAL_ERROR;
  }
}

template <typename T>
T& Deref(T* p, const char* what) {
  if (p == nullptr) {
    cubespec::Fail(ErrorCode::kInvalidArgument,
                   std::string("null pointer: ") + what);
  }
  return *p;
}

char* Duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cubespec::SolverConfig ToSolver(const cubespec_solver_config* c) {
  cubespec::SolverConfig s;
  if (c != nullptr) {
    s.tol = c->tol;
    s.max_iter = c->max_iter;
    s.start_seed = c->start_seed;
    s.reorthogonalize = c->reorthogonalize != 0;
    s.max_basis = c->max_basis;
  }
  return s;
}

const cubespec::HypercubeSubgraph& GraphOf(const cubespec_graph* g) {
  return Deref(g, "graph").graph;
}


ordered_json OptionalInt(const std::optional<int>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json IntervalJson(const cubespec::DegreeInterval& d) {
  return ordered_json::array({d.lo, d.hi});
}

}  // namespace

extern "C" {

const char* cubespec_version(void) { return "1.0.0"; }

const char* cubespec_status_string(cubespec_status status) {
  switch (status) {
    case CUBESPEC_OK: return "ok";
    case CUBESPEC_INVALID_ARGUMENT: return "invalid argument";
    case CUBESPEC_OUT_OF_RANGE: return "out of range";
    case CUBESPEC_IO_ERROR: return "i/o error";
    case CUBESPEC_PARSE_ERROR: return "parse error";
    case CUBESPEC_SCHEMA_ERROR: return "schema error";
    case CUBESPEC_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* cubespec_last_error(void) { return g_last_error.c_str(); }

void cubespec_string_free(char* s) { std::free(s); }

cubespec_status cubespec_graph_sample(int n, double p, uint64_t master_seed,
                                      uint64_t trial_index,
                                      cubespec_graph** out) {
  return Guard([&] {
    cubespec_graph*& slot = Deref(out, "out");
    const cubespec::SampleParams params{n, p, master_seed, trial_index};
    slot = new cubespec_graph{cubespec::SampleSubgraph(params), params};
  });
}

cubespec_status cubespec_graph_full_cube(int n, cubespec_graph** out) {
  return Guard([&] {
    cubespec_graph*& slot = Deref(out, "out");
    slot = new cubespec_graph{cubespec::HypercubeSubgraph::FullCube(n), {}};
  });
}

cubespec_status cubespec_graph_from_edges(int n, const uint32_t* pairs,
                                          size_t edge_count,
                                          cubespec_graph** out) {
  return Guard([&] {
    cubespec_graph*& slot = Deref(out, "out");
    if (edge_count > 0 && pairs == nullptr) {
      cubespec::Fail(ErrorCode::kInvalidArgument, "null edge array");
    }
    std::vector<cubespec::Edge> edges(edge_count);
    for (size_t e = 0; e < edge_count; ++e) {
      edges[e] = {pairs[2 * e], pairs[2 * e + 1]};
    }
    slot = new cubespec_graph{cubespec::FromEdgeList(n, edges), {}};
  });
}

cubespec_status cubespec_graph_read_edges(const char* path,
                                          cubespec_graph** out) {
  return Guard([&] {
    cubespec_graph*& slot = Deref(out, "out");
    slot = new cubespec_graph{
        cubespec::ReadEdgeListFile(std::string(&Deref(path, "path"))), {}};
  });
}

cubespec_status cubespec_graph_write_edges(const cubespec_graph* g,
                                           const char* path) {
  return Guard([&] {
    cubespec::WriteEdgeListFile(GraphOf(g), std::string(&Deref(path, "path")));
  });
}

void cubespec_graph_free(cubespec_graph* g) { delete g; }

cubespec_status cubespec_graph_dimension(const cubespec_graph* g, int* n) {
  return Guard([&] { Deref(n, "n") = GraphOf(g).dimension(); });
}

cubespec_status cubespec_graph_edge_count(const cubespec_graph* g,
                                          uint64_t* m) {
  return Guard([&] { Deref(m, "m") = GraphOf(g).edge_count(); });
}

cubespec_status cubespec_graph_degree(const cubespec_graph* g, uint32_t v,
                                      int* degree) {
  return Guard([&] { Deref(degree, "degree") = GraphOf(g).degree(v); });
}

cubespec_status cubespec_graph_max_degree(const cubespec_graph* g,
                                          int* delta) {
  return Guard([&] { Deref(delta, "delta") = cubespec::MaxDegree(GraphOf(g)); });
}

cubespec_status cubespec_graph_info_json(const cubespec_graph* g,
                                         char** json) {
  return Guard([&] {
    char*& slot = Deref(json, "json");
    const auto& graph = GraphOf(g);
    ordered_json j;
    j["n"] = graph.dimension();
    j["m"] = graph.edge_count();
    j["delta"] = cubespec::MaxDegree(graph);
    j["degree_histogram"] = cubespec::DegreeHistogram(graph);
    if (g->sampled_with) {
      const auto& s = *g->sampled_with;
      j["p"] = s.p;
      j["master_seed"] = s.master_seed;
      j["trial_index"] = s.trial_index;
      j["derived_seed"] = cubespec::DeriveTrialSeed(s);
      j["sampler"] = std::string(cubespec::SamplerAlgorithm(s.p));
    }
    slot = Duplicate(j.dump());
  });
}

void cubespec_solver_config_init(cubespec_solver_config* config) {
  if (config == nullptr) return;
  const cubespec::SolverConfig d;
  config->tol = d.tol;
  config->max_iter = d.max_iter;
  config->start_seed = d.start_seed;
  config->reorthogonalize = d.reorthogonalize ? 1 : 0;
  config->max_basis = d.max_basis;
}

cubespec_status cubespec_lambda1(const cubespec_graph* g,
                                 const cubespec_solver_config* config,
                                 cubespec_spectral_result* result,
                                 double* vector, size_t vector_len) {
  return Guard([&] {
    const auto& graph = GraphOf(g);
    cubespec_spectral_result& out = Deref(result, "result");
    if (vector != nullptr && vector_len != graph.vertex_count()) {
      cubespec::Fail(ErrorCode::kInvalidArgument,
                     "vector length must equal 2^n");
    }
    cubespec::SolverConfig s = ToSolver(config);
    s.want_vector = vector != nullptr;
    const cubespec::SpectralResult r = cubespec::LanczosLambda1(graph, s);
    out.lambda1 = r.lambda1;
    out.iterations = r.iterations;
    out.residual = r.residual;
    out.converged = r.converged ? 1 : 0;
    if (vector != nullptr) {
      std::memcpy(vector, r.vector->data(), vector_len * sizeof(double));
    }
  });
}

cubespec_status cubespec_dense_spectrum(const cubespec_graph* g, double* out,
                                        size_t len) {
  return Guard([&] {
    const auto& graph = GraphOf(g);
    Deref(out, "out");
    if (len != graph.vertex_count()) {
      cubespec::Fail(ErrorCode::kInvalidArgument, "output length must be 2^n");
    }
    const std::vector<double> spectrum = cubespec::DenseSpectrum(graph);
    std::memcpy(out, spectrum.data(), len * sizeof(double));
  });
}

cubespec_status cubespec_bounds_json(const cubespec_graph* g, double p,
                                     const cubespec_solver_config* config,
                                     char** json) {
  return Guard([&] {
    char*& slot = Deref(json, "json");
    const auto& graph = GraphOf(g);
    const cubespec::BoundReport b = cubespec::ComputeBoundReport(graph, p);
    const cubespec::SpectralResult s =
        cubespec::LanczosLambda1(graph, ToSolver(config));
    const cubespec::Sandwich sw = cubespec::SandwichBounds(graph);
    constexpr double kSlack = 1e-9;
    ordered_json j;
    j["n"] = graph.dimension();
    j["p"] = p;
    j["m"] = b.edges;
    j["delta"] = b.max_degree;
    j["walk2_max"] = b.walk2_max;
    j["sqrt_max_degree"] = b.sqrt_max_degree;
    j["avg_degree"] = b.avg_degree;
    j["max_degree_bound"] = b.max_degree_bound;
    j["sqrt_edges"] = b.sqrt_edges;
    j["walk2_bound"] = b.walk2_bound;
    j["parity_product_bound"] = b.parity_product_bound;
    j["prediction"] = b.prediction;
    j["lambda1"] = s.lambda1;
    j["converged"] = s.converged;
    ordered_json checks;
    checks["lower_sandwich"] = s.lambda1 >= sw.lower - kSlack;
    checks["upper_sandwich"] = s.lambda1 <= sw.upper + kSlack;
    checks["walk2"] = s.lambda1 <= b.walk2_bound + kSlack;
    checks["sqrt_edges"] = s.lambda1 <= b.sqrt_edges + kSlack;
    checks["parity_product"] = s.lambda1 <= b.parity_product_bound + kSlack;
    j["checks"] = checks;
    slot = Duplicate(j.dump());
  });
}

cubespec_status cubespec_common_cube_neighbors(uint32_t u, uint32_t v, int n,
                                               int* count) {
  return Guard([&] {
    Deref(count, "count") = cubespec::CommonCubeNeighbors(u, v, n);
  });
}

cubespec_status cubespec_kappa(int n, double p, int* kappa, int* defined) {
  return Guard([&] {
    int& k = Deref(kappa, "kappa");
    int& d = Deref(defined, "defined");
    const auto value = cubespec::Kappa(n, p);
    d = value ? 1 : 0;
    k = value.value_or(-1);
  });
}

cubespec_status cubespec_expected_exceed_count(int n, double p, int k,
                                               double* value) {
  return Guard([&] {
    Deref(value, "value") = cubespec::ExpectedExceedCount(n, p, k);
  });
}

cubespec_status cubespec_kappa_json(int n, double p, char** json) {
  return Guard([&] {
    char*& slot = Deref(json, "json");
    const cubespec::DegreeProfile prof = cubespec::ComputeDegreeProfile(n, p);
    ordered_json j;
    j["n"] = prof.n;
    j["p"] = prof.p;
    j["kappa"] = OptionalInt(prof.kappa);
    j["regime"] = std::string(cubespec::RegimeName(prof.regime));
    if (prof.kappa) {
      j["predicted_delta_range"] = IntervalJson(prof.predicted.range);
      j["degree_law"] = std::string(cubespec::DegreeLawName(prof.predicted.law));
    } else {
      j["predicted_delta_range"] = nullptr;
      j["degree_law"] = nullptr;
    }
    j["c_coefficient"] = prof.c_coefficient ? ordered_json(*prof.c_coefficient)
                                            : ordered_json(nullptr);
    j["expected_exceed_counts"] = prof.exceed_counts;
    slot = Duplicate(j.dump());
  });
}

cubespec_status cubespec_tails_csv(int n, double p, int trials,
                                   uint64_t master_seed, int threads,
                                   char** csv) {
  return Guard([&] {
    char*& slot = Deref(csv, "csv");
    std::ostringstream out;
    cubespec::WriteTails(cubespec::TailsTable(n, p, trials, master_seed, threads),
                         out);
    slot = Duplicate(out.str());
  });
}

cubespec_status cubespec_components_json(const cubespec_graph* g, double p,
                                         const cubespec_solver_config* config,
                                         char** json) {
  return Guard([&] {
    char*& slot = Deref(json, "json");
    const auto& graph = GraphOf(g);
    const cubespec::SolverConfig solver = ToSolver(config);
    const cubespec::SpectralResult s = cubespec::LanczosLambda1(graph, solver);
    const cubespec::ComponentsSummary sum =
        cubespec::SummarizeComponents(graph, p, s.lambda1, solver);
    ordered_json yk = ordered_json::object();
    for (const auto& [k, count] : sum.census.yk) yk[std::to_string(k)] = count;
    ordered_json case4;
    case4["lambda1"] = sum.case4.lambda1;
    case4["delta"] = sum.case4.max_degree;
    case4["lambda_sq_in_delta_set"] = sum.case4.lambda_sq_matches;
    case4["achieving_component_is_star"] = sum.case4.achieving_is_star;
    ordered_json j;
    j["n"] = graph.dimension();
    j["p"] = p;
    j["regime"] = std::string(
        cubespec::RegimeName(cubespec::ClassifyRegime(graph.dimension(), p)));
    j["components"] = sum.census.size();
    j["yk"] = yk;
    j["largest_component_edges"] = sum.census.largest_component_edges;
    j["k0"] = sum.k0 ? ordered_json(*sum.k0) : ordered_json(nullptr);
    j["star_fraction"] = sum.star_fraction;
    j["case4_check"] = case4;
    slot = Duplicate(j.dump());
  });
}

cubespec_status cubespec_locality_json(const cubespec_graph* g,
                                       const cubespec_locality_query* query,
                                       char** json) {
  return Guard([&] {
    char*& slot = Deref(json, "json");
    const auto& graph = GraphOf(g);
    const cubespec_locality_query& q = Deref(query, "query");
    cubespec::ScanOptions scan;
    if (q.sample_size > 0) {
      scan.sample_size = static_cast<std::uint64_t>(q.sample_size);
      scan.sample_seed = q.sample_seed;
    }
    cubespec::LocalityReport r;
    ordered_json j;
    if (q.mode == CUBESPEC_LOCALITY_HIGH_DEGREE) {
      r = cubespec::HighDegreeClusterStat(graph, q.p, q.a, q.b, scan);
      j["mode"] = "i";
      j["a"] = q.a;
      j["b"] = q.b;
    } else if (q.mode == CUBESPEC_LOCALITY_ABOVE_MEAN) {
      r = cubespec::AboveMeanClusterStat(graph, q.p, q.a, scan);
      j["mode"] = "ii";
      j["a"] = q.a;
    } else {
      cubespec::Fail(ErrorCode::kInvalidArgument, "unknown locality mode");
    }
    j["p"] = q.p;
    j["threshold"] = r.threshold;
    j["max_cluster"] = r.max_cluster;
    j["argmax_vertex"] = r.argmax_vertex;
    j["cluster_limit"] = r.cluster_limit;
    j["conclusion_holds"] = r.conclusion_holds;
    j["sampled"] = r.sampled;
    ordered_json hyp;
    if (q.mode == CUBESPEC_LOCALITY_HIGH_DEGREE) {
      hyp["a_plus_b_gt_1"] = r.hypothesis_sum;
      hyp["n_pow_b_ge_6np"] = r.hypothesis_threshold;
    } else {
      hyp["p_ge_n_pow_minus_2_3"] = r.hypothesis_density;
    }
    j["hypotheses"] = hyp;
    slot = Duplicate(j.dump());
  });
}

cubespec_status cubespec_experiment_create(cubespec_experiment** out) {
  return Guard([&] { Deref(out, "out") = new cubespec_experiment{}; });
}

cubespec_status cubespec_experiment_load(const char* path,
                                         cubespec_experiment** out) {
  return Guard([&] {
    cubespec_experiment*& slot = Deref(out, "out");
    slot = new cubespec_experiment{
        cubespec::ParseConfigFile(std::string(&Deref(path, "path")))};
  });
}

cubespec_status cubespec_experiment_set(cubespec_experiment* e,
                                        const char* key, const char* value) {
  return Guard([&] {
    cubespec::ApplyConfigValue(Deref(e, "experiment").config,
                               &Deref(key, "key"), &Deref(value, "value"));
  });
}

void cubespec_experiment_free(cubespec_experiment* e) { delete e; }

cubespec_status cubespec_experiment_run(const cubespec_experiment* e,
                                        size_t* violations, char** report) {
  return Guard([&] {
    const cubespec::ExperimentConfig& c = Deref(e, "experiment").config;
    size_t& bad = Deref(violations, "violations");
    if (c.output_path.empty()) {
      cubespec::Fail(ErrorCode::kInvalidArgument, "no output path configured");
    }
    const cubespec::ExperimentResult res = cubespec::RunExperiment(c);
    cubespec::WriteRecordsFile(res.records, c.output_path, c.format);
    if (!c.plot_path.empty()) {
      cubespec::PlotRatioFile(res.records, res.series, c.plot_path);
    }
    if (!res.locality.empty()) {
      cubespec::WriteLocalityFile(res.locality, c.output_path + ".locality.csv");
    }
    bad = 0;
    size_t unconverged = 0;
    ordered_json problems = ordered_json::array();
    for (const auto& r : res.records) {
      const auto issues = cubespec::CheckRecord(r, c.solver.tol);
      bad += issues.empty() ? 0 : 1;
      for (const auto& s : issues) problems.push_back(s);
      unconverged += r.converged ? 0 : 1;
    }
    if (report != nullptr) {
      ordered_json j;
      j["records"] = res.records.size();
      j["output"] = c.output_path;
      j["format"] = std::string(cubespec::FormatName(c.format));
      j["plot"] = c.plot_path.empty() ? ordered_json(nullptr)
                                      : ordered_json(c.plot_path);
      j["unconverged"] = unconverged;
      j["violations"] = problems;
      *report = Duplicate(j.dump());
    }
  });
}

cubespec_status cubespec_experiment_verify(const cubespec_experiment* e,
                                           size_t* violations, char** report) {
  return Guard([&] {
    const cubespec::VerifyReport r =
        cubespec::RunVerification(Deref(e, "experiment").config);
    Deref(violations, "violations") = r.violations.size();
    if (report != nullptr) {
      ordered_json j;
      j["graphs"] = r.graphs;
      j["checks"] = r.checks;
      j["violations"] = r.violations;
      j["ok"] = r.ok();
      *report = Duplicate(j.dump());
    }
  });
}

cubespec_status cubespec_summarize_file(const char* records_path, char** csv) {
  return Guard([&] {
    char*& slot = Deref(csv, "csv");
    const auto records =
        cubespec::ReadRecordsFile(std::string(&Deref(records_path, "path")));
    std::ostringstream out;
    cubespec::WriteSummary(cubespec::Summarize(records), out);
    slot = Duplicate(out.str());
  });
}

cubespec_status cubespec_plot_file(const char* records_path,
                                   const char* svg_path) {
  return Guard([&] {
    const auto records =
        cubespec::ReadRecordsFile(std::string(&Deref(records_path, "path")));
    cubespec::PlotRatioFile(records, {}, std::string(&Deref(svg_path, "path")));
  });
}

}  // extern "C"
