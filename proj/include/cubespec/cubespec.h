/*
 * C interface to the cubespec library: random subgraphs of the n-cube, their
 * largest adjacency eigenvalue, eigenvalue bounds, extreme-degree theory and
 * the Monte Carlo experiment harness.
 *
 * Every fallible call returns a cubespec_status. On failure the message is
 * available from cubespec_last_error() until the next call on the same
 * thread. Strings returned through char** out-parameters are owned by the
 * caller and released with cubespec_string_free().
 */
#ifndef CUBESPEC_H_
#define CUBESPEC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CUBESPEC_BUILDING)
#    define CUBESPEC_API __declspec(dllexport)
#  else
#    define CUBESPEC_API __declspec(dllimport)
#  endif
#else
#  define CUBESPEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cubespec_status {
  CUBESPEC_OK = 0,
  CUBESPEC_INVALID_ARGUMENT = 1,
  CUBESPEC_OUT_OF_RANGE = 2,
  CUBESPEC_IO_ERROR = 3,
  CUBESPEC_PARSE_ERROR = 4,
  CUBESPEC_SCHEMA_ERROR = 5,
  CUBESPEC_INTERNAL_ERROR = 6
} cubespec_status;

typedef struct cubespec_graph cubespec_graph;
typedef struct cubespec_experiment cubespec_experiment;

typedef struct cubespec_solver_config {
  double tol;
  int max_iter;
  uint64_t start_seed;
  int reorthogonalize;
  int max_basis;
} cubespec_solver_config;

typedef struct cubespec_spectral_result {
  double lambda1;
  int iterations;
  double residual;
  int converged;
} cubespec_spectral_result;

enum { CUBESPEC_LOCALITY_HIGH_DEGREE = 1, CUBESPEC_LOCALITY_ABOVE_MEAN = 2 };

typedef struct cubespec_locality_query {
  int mode;              /* CUBESPEC_LOCALITY_* */
  double a;
  double b;              /* ignored for CUBESPEC_LOCALITY_ABOVE_MEAN */
  double p;              /* edge probability the graph was drawn with */
  int64_t sample_size;   /* <= 0 scans every vertex */
  uint64_t sample_seed;
} cubespec_locality_query;

CUBESPEC_API const char* cubespec_version(void);
CUBESPEC_API const char* cubespec_status_string(cubespec_status status);
CUBESPEC_API const char* cubespec_last_error(void);
CUBESPEC_API void cubespec_string_free(char* s);

/* Graphs */
CUBESPEC_API cubespec_status cubespec_graph_sample(int n, double p,
                                                   uint64_t master_seed,
                                                   uint64_t trial_index,
                                                   cubespec_graph** out);
CUBESPEC_API cubespec_status cubespec_graph_full_cube(int n,
                                                      cubespec_graph** out);
/* pairs holds 2 * edge_count vertex ids (v0, w0, v1, w1, ...). */
CUBESPEC_API cubespec_status cubespec_graph_from_edges(int n,
                                                       const uint32_t* pairs,
                                                       size_t edge_count,
                                                       cubespec_graph** out);
CUBESPEC_API cubespec_status cubespec_graph_read_edges(const char* path,
                                                       cubespec_graph** out);
CUBESPEC_API cubespec_status cubespec_graph_write_edges(
    const cubespec_graph* g, const char* path);
CUBESPEC_API void cubespec_graph_free(cubespec_graph* g);

CUBESPEC_API cubespec_status cubespec_graph_dimension(const cubespec_graph* g,
                                                      int* n);
CUBESPEC_API cubespec_status cubespec_graph_edge_count(const cubespec_graph* g,
                                                       uint64_t* m);
CUBESPEC_API cubespec_status cubespec_graph_degree(const cubespec_graph* g,
                                                   uint32_t v, int* degree);
CUBESPEC_API cubespec_status cubespec_graph_max_degree(const cubespec_graph* g,
                                                       int* delta);
/* {n, m, delta, degree_histogram[, p, master_seed, trial_index,
 *  derived_seed, sampler]} */
CUBESPEC_API cubespec_status cubespec_graph_info_json(const cubespec_graph* g,
                                                      char** json);

/* Spectra */
CUBESPEC_API void cubespec_solver_config_init(cubespec_solver_config* config);
/* vector may be NULL; otherwise vector_len must equal 2^n and receives the
 * unit Ritz vector. config may be NULL for defaults. */
CUBESPEC_API cubespec_status cubespec_lambda1(
    const cubespec_graph* g, const cubespec_solver_config* config,
    cubespec_spectral_result* result, double* vector, size_t vector_len);
/* Full spectrum, non-increasing; n <= 10 and len == 2^n. */
CUBESPEC_API cubespec_status cubespec_dense_spectrum(const cubespec_graph* g,
                                                     double* out, size_t len);

/* Bounds and degree theory */
CUBESPEC_API cubespec_status cubespec_bounds_json(
    const cubespec_graph* g, double p, const cubespec_solver_config* config,
    char** json);
CUBESPEC_API cubespec_status cubespec_common_cube_neighbors(uint32_t u,
                                                            uint32_t v, int n,
                                                            int* count);
CUBESPEC_API cubespec_status cubespec_kappa(int n, double p, int* kappa,
                                            int* defined);
CUBESPEC_API cubespec_status cubespec_expected_exceed_count(int n, double p,
                                                            int k,
                                                            double* value);
CUBESPEC_API cubespec_status cubespec_kappa_json(int n, double p, char** json);
/* CSV: k,bound_lt,bound_ge,mc_lt,mc_ge,trials */
CUBESPEC_API cubespec_status cubespec_tails_csv(int n, double p, int trials,
                                                uint64_t master_seed,
                                                int threads, char** csv);

/* Components and locality */
CUBESPEC_API cubespec_status cubespec_components_json(
    const cubespec_graph* g, double p, const cubespec_solver_config* config,
    char** json);
CUBESPEC_API cubespec_status cubespec_locality_json(
    const cubespec_graph* g, const cubespec_locality_query* query,
    char** json);

/* Experiments. Keys for cubespec_experiment_set match the config file. */
CUBESPEC_API cubespec_status cubespec_experiment_create(
    cubespec_experiment** out);
CUBESPEC_API cubespec_status cubespec_experiment_load(
    const char* path, cubespec_experiment** out);
CUBESPEC_API cubespec_status cubespec_experiment_set(cubespec_experiment* e,
                                                     const char* key,
                                                     const char* value);
CUBESPEC_API void cubespec_experiment_free(cubespec_experiment* e);
/* Writes the records file (and plot, when configured). violations counts
 * records failing the bound checks. report may be NULL. */
CUBESPEC_API cubespec_status cubespec_experiment_run(
    const cubespec_experiment* e, size_t* violations, char** report);
CUBESPEC_API cubespec_status cubespec_experiment_verify(
    const cubespec_experiment* e, size_t* violations, char** report);

CUBESPEC_API cubespec_status cubespec_summarize_file(const char* records_path,
                                                     char** csv);
CUBESPEC_API cubespec_status cubespec_plot_file(const char* records_path,
                                                const char* svg_path);

#ifdef __cplusplus
}
#endif

#endif /* CUBESPEC_H_ */
