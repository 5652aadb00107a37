#ifndef DHRG_DHRG_H
#define DHRG_DHRG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DHRG_BUILDING)
#define DHRG_API __declspec(dllexport)
#else
#define DHRG_API __declspec(dllimport)
#endif
#else
#define DHRG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dhrg_status {
  DHRG_OK = 0,
  DHRG_INVALID_ARGUMENT = 1,
  DHRG_PARSE_ERROR = 2,
  DHRG_IO_ERROR = 3,
  DHRG_NUMERIC_ERROR = 4,
  DHRG_OUT_OF_RANGE = 5,
  DHRG_OUT_OF_MEMORY = 6,
  DHRG_INTERNAL_ERROR = 7
} dhrg_status;

typedef enum dhrg_grid_kind { DHRG_GRID_G7 = 0, DHRG_GRID_G67 = 1 } dhrg_grid_kind;

/* Opaque handles. Embeddings and generated graphs refer to vertices of the grid they were made
   with; the grid must outlive them. A handle is used from one thread at a time. */
typedef struct dhrg_grid dhrg_grid;
typedef struct dhrg_graph dhrg_graph;
typedef struct dhrg_embedding dhrg_embedding;
typedef struct dhrg_continuous dhrg_continuous;
typedef struct dhrg_tables dhrg_tables;
typedef struct dhrg_search dhrg_search;
typedef struct dhrg_report dhrg_report;

/* Message of the last failed call on this thread; never NULL. */
DHRG_API const char* dhrg_last_error(void);
DHRG_API const char* dhrg_version(void);

/* Functions returning text copy it into buf (always NUL-terminated when cap > 0) and store the
   full length, without the terminator, in *needed. */

/* Grids */
DHRG_API dhrg_status dhrg_grid_kind_parse(const char* name, dhrg_grid_kind* out);
DHRG_API dhrg_status dhrg_grid_new(dhrg_grid_kind kind, dhrg_grid** out);
DHRG_API void dhrg_grid_free(dhrg_grid* grid);
DHRG_API dhrg_status dhrg_grid_describe(const dhrg_grid* grid, char* buf, size_t cap, size_t* needed);
DHRG_API dhrg_status dhrg_grid_growth_rate(const dhrg_grid* grid, double* out);
/* Exact ring size as a decimal string. */
DHRG_API dhrg_status dhrg_grid_ring_size(const dhrg_grid* grid, int k, char* buf, size_t cap, size_t* needed);
/* Grid distance between the vertices reached by two child-index paths from the root. */
DHRG_API dhrg_status dhrg_grid_distance(dhrg_grid* grid, const int* path_a, size_t len_a, const int* path_b,
                                        size_t len_b, int* out);

/* Graphs */
DHRG_API dhrg_status dhrg_graph_read_edge_list(const char* path, dhrg_graph** out);
/* Edgeless graph on the vertex names listed in an embedding file. */
DHRG_API dhrg_status dhrg_graph_from_embedding_file(const char* path, dhrg_graph** out);
DHRG_API dhrg_status dhrg_graph_write_edge_list(const dhrg_graph* graph, const char* path);
DHRG_API dhrg_status dhrg_graph_size(const dhrg_graph* graph, int64_t* vertices, int64_t* edges);
DHRG_API void dhrg_graph_free(dhrg_graph* graph);

/* Grid embeddings. Reading resolves the file's vertex names against the graph. */
DHRG_API dhrg_status dhrg_embedding_read(dhrg_grid* grid, const dhrg_graph* graph, const char* path,
                                         dhrg_embedding** out);
DHRG_API dhrg_status dhrg_embedding_write(const dhrg_embedding* emb, const char* path);
/* Model parameters carried by the embedding (from its file, or from generation). */
DHRG_API dhrg_status dhrg_embedding_params(const dhrg_embedding* emb, double* R, double* T, double* alpha);
DHRG_API dhrg_status dhrg_embedding_set_params(dhrg_embedding* emb, double R, double T, double alpha);
DHRG_API dhrg_status dhrg_embedding_max_depth(const dhrg_embedding* emb, int* out);
DHRG_API void dhrg_embedding_free(dhrg_embedding* emb);

/* Continuous embeddings */
DHRG_API dhrg_status dhrg_continuous_read(const dhrg_graph* graph, const char* path, dhrg_continuous** out);
DHRG_API dhrg_status dhrg_continuous_write(const dhrg_continuous* c, const char* path);
DHRG_API dhrg_status dhrg_continuous_params(const dhrg_continuous* c, double* R, double* T, double* alpha);
/* Direct sum over all vertex pairs. */
DHRG_API dhrg_status dhrg_continuous_log_likelihood(const dhrg_continuous* c, double R, double T, double* out);
DHRG_API void dhrg_continuous_free(dhrg_continuous* c);

DHRG_API dhrg_status dhrg_convert_to_grid(dhrg_grid* grid, const dhrg_continuous* c, dhrg_embedding** out);
DHRG_API dhrg_status dhrg_convert_to_continuous(const dhrg_embedding* emb, dhrg_continuous** out);

/* Generation */
typedef struct dhrg_params {
  int n;
  int D;
  double alpha;
  double R;
  double T;
} dhrg_params;
DHRG_API dhrg_status dhrg_generate(dhrg_grid* grid, const dhrg_params* params, uint64_t seed, dhrg_graph** graph,
                                   dhrg_embedding** emb);

/* Likelihood */
DHRG_API dhrg_status dhrg_tables_compute(const dhrg_embedding* emb, dhrg_tables** out);
DHRG_API dhrg_status dhrg_tables_size(const dhrg_tables* t, size_t* out);
DHRG_API dhrg_status dhrg_tables_get(const dhrg_tables* t, size_t d, int64_t* tally, int64_t* edgetally);
DHRG_API void dhrg_tables_free(dhrg_tables* t);
DHRG_API dhrg_status dhrg_log_likelihood(const dhrg_tables* t, double R, double T, double* out);
DHRG_API dhrg_status dhrg_best_nonparametric(const dhrg_tables* t, double* out);
DHRG_API dhrg_status dhrg_trivial_likelihood(int64_t n, int64_t m, double* out);
DHRG_API dhrg_status dhrg_placement_likelihood(const dhrg_embedding* emb, double* out);

typedef struct dhrg_fit {
  double R;
  double T;
  double log_likelihood;
  double grad_R;
  double grad_T;
  int boundary;
  int degenerate;
} dhrg_fit;
DHRG_API dhrg_status dhrg_fit_logistic(const dhrg_tables* t, dhrg_fit* out);

/* Local search */
typedef struct dhrg_search_options {
  int max_iters;
  int refit;
  /* Nonzero: visit vertices in an order shuffled from seed each sweep. */
  int shuffle;
  uint64_t seed;
} dhrg_search_options;
typedef void (*dhrg_sweep_callback)(int sweep, int64_t moves, double log_likelihood, void* user);
DHRG_API dhrg_status dhrg_local_search(const dhrg_embedding* emb, double R, double T,
                                       const dhrg_search_options* options, dhrg_sweep_callback progress,
                                       void* user, dhrg_search** out);
DHRG_API dhrg_status dhrg_search_summary(const dhrg_search* s, int* sweeps, int64_t* moves, double* R, double* T);
/* Entry 0 is the starting log-likelihood; entry i the value after sweep i. */
DHRG_API dhrg_status dhrg_search_trace_size(const dhrg_search* s, size_t* out);
DHRG_API dhrg_status dhrg_search_trace_get(const dhrg_search* s, size_t i, double* log_likelihood, int64_t* moves);
/* New embedding owned by the caller. */
DHRG_API dhrg_status dhrg_search_embedding(const dhrg_search* s, dhrg_embedding** out);
DHRG_API void dhrg_search_free(dhrg_search* s);

/* Distribution of hyperbolic radii of uniform ring vertices. */
typedef struct dhrg_conjecture_summary {
  double c1;
  double c0;
  double variance_slope;
  double skewness;
  double excess_kurtosis;
  double jarque_bera;
} dhrg_conjecture_summary;
/* means and variances have one entry per depth. */
DHRG_API dhrg_status dhrg_conjecture(dhrg_grid* grid, const int* depths, size_t count, int samples, uint64_t seed,
                                     double* means, double* variances, dhrg_conjecture_summary* out);

/* Timing tables for "dist", "tally" or "gen", written into a report. */
DHRG_API dhrg_status dhrg_bench(dhrg_grid_kind kind, const char* suite, uint64_t seed, dhrg_report* report);

/* Reports: "# key = value" lines, then tab-separated tables. */
DHRG_API dhrg_status dhrg_report_new(dhrg_report** out);
DHRG_API void dhrg_report_free(dhrg_report* r);
DHRG_API dhrg_status dhrg_report_set(dhrg_report* r, const char* key, const char* value);
DHRG_API dhrg_status dhrg_report_set_number(dhrg_report* r, const char* key, double value);
/* columns is tab-separated. */
DHRG_API dhrg_status dhrg_report_add_table(dhrg_report* r, const char* name, const char* columns);
/* Appends a row to the most recent table; cells is tab-separated. */
DHRG_API dhrg_status dhrg_report_add_row(dhrg_report* r, const char* cells);
/* path NULL or "-" writes to standard output. */
DHRG_API dhrg_status dhrg_report_write(const dhrg_report* r, const char* path);
DHRG_API dhrg_status dhrg_format_number(double x, char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
