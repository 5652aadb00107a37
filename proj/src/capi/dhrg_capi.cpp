#include "dhrg/dhrg.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "bench.hpp"
#include "dhrg.hpp"
#include "error.hpp"
#include "io.hpp"

using dhrg::ErrorKind;

struct dhrg_grid {
  dhrg::Grid grid;
};

struct dhrg_graph {
  std::shared_ptr<const dhrg::NetworkGraph> graph;
};

struct dhrg_embedding {
  dhrg_grid* grid;
  std::shared_ptr<const dhrg::NetworkGraph> graph;
  dhrg::GridEmbedding emb;
  double R, T, alpha;
};

struct dhrg_continuous {
  std::shared_ptr<const dhrg::NetworkGraph> graph;
  dhrg::ContinuousEmbedding c;
};

struct dhrg_tables {
  dhrg::LikelihoodTables t;
};

struct dhrg_search {
  dhrg_grid* grid;
  std::shared_ptr<const dhrg::NetworkGraph> graph;
  dhrg::LocalSearchResult result;
  double alpha;
};

struct dhrg_report {
  dhrg::Report report;
};

namespace {

thread_local std::string lastError;

dhrg_status statusOf(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return DHRG_INVALID_ARGUMENT;
    case ErrorKind::Parse: return DHRG_PARSE_ERROR;
    case ErrorKind::Io: return DHRG_IO_ERROR;
    case ErrorKind::Numeric: return DHRG_NUMERIC_ERROR;
    case ErrorKind::OutOfRange: return DHRG_OUT_OF_RANGE;
    case ErrorKind::Internal: return DHRG_INTERNAL_ERROR;
  }
  return DHRG_INTERNAL_ERROR;
}

template <class F>
dhrg_status guard(F&& f) {
  try {
    f();
    lastError.clear();
    return DHRG_OK;
  } catch (const dhrg::Error& e) {
    lastError = e.what();
    return statusOf(e.kind());
  } catch (const std::bad_alloc&) {
    lastError = "out of memory";
    return DHRG_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    lastError = e.what();
    return DHRG_INTERNAL_ERROR;
  } catch (...) {
    lastError = "unknown error";
    return DHRG_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  if (!p) dhrg::fail(ErrorKind::InvalidArgument, std::string(what) + " is null");
}

void copyOut(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size();
  if (buf && cap > 0) {
    size_t n = s.size() < cap - 1 ? s.size() : cap - 1;
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
}

void singleLine(const char* s, const char* what) {
  if (std::strchr(s, '\n') || std::strchr(s, '\r'))
    dhrg::fail(ErrorKind::InvalidArgument, std::string(what) + " must not contain line breaks");
}

std::vector<std::string> splitTabs(const char* s) {
  singleLine(s, "table text");
  std::vector<std::string> out;
  std::string cur;
  for (const char* p = s; *p; ++p) {
    if (*p == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += *p;
    }
  }
  out.push_back(cur);
  return out;
}

std::ofstream openOut(const char* path) {
  std::ofstream f(path);
  if (!f) dhrg::fail(ErrorKind::Io, std::string("cannot open '") + path + "' for writing");
  return f;
}

void finish(std::ofstream& f, const char* path) {
  f.flush();
  if (!f) dhrg::fail(ErrorKind::Io, std::string("write to '") + path + "' failed");
}

dhrg::GridKind kindOf(dhrg_grid_kind k) {
  if (k == DHRG_GRID_G7) return dhrg::GridKind::G7;
  if (k == DHRG_GRID_G67) return dhrg::GridKind::G67;
  dhrg::fail(ErrorKind::InvalidArgument, "unknown grid kind");
}

}  // namespace

extern "C" {

const char* dhrg_last_error(void) { return lastError.c_str(); }

const char* dhrg_version(void) { return "0.1.0"; }

dhrg_status dhrg_grid_kind_parse(const char* name, dhrg_grid_kind* out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = dhrg::parseGridKind(name) == dhrg::GridKind::G7 ? DHRG_GRID_G7 : DHRG_GRID_G67;
  });
}

dhrg_status dhrg_grid_new(dhrg_grid_kind kind, dhrg_grid** out) {
  return guard([&] {
    need(out, "out");
    *out = new dhrg_grid{dhrg::Grid(kindOf(kind))};
  });
}

void dhrg_grid_free(dhrg_grid* grid) { delete grid; }

dhrg_status dhrg_grid_describe(const dhrg_grid* grid, char* buf, size_t cap, size_t* needed) {
  return guard([&] {
    need(grid, "grid");
    copyOut(grid->grid.spec().describe(), buf, cap, needed);
  });
}

dhrg_status dhrg_grid_growth_rate(const dhrg_grid* grid, double* out) {
  return guard([&] {
    need(grid, "grid");
    need(out, "out");
    *out = grid->grid.growthRate();
  });
}

dhrg_status dhrg_grid_ring_size(const dhrg_grid* grid, int k, char* buf, size_t cap, size_t* needed) {
  return guard([&] {
    need(grid, "grid");
    if (k < 0 || k > dhrg::kMaxDepth) dhrg::fail(ErrorKind::OutOfRange, "ring index out of range");
    copyOut(grid->grid.ringSize(k).str(), buf, cap, needed);
  });
}

dhrg_status dhrg_grid_distance(dhrg_grid* grid, const int* path_a, size_t len_a, const int* path_b, size_t len_b,
                               int* out) {
  return guard([&] {
    need(grid, "grid");
    need(out, "out");
    if ((len_a && !path_a) || (len_b && !path_b)) dhrg::fail(ErrorKind::InvalidArgument, "path is null");
    dhrg::VertexId a = grid->grid.followPath(std::span<const int>(path_a, len_a));
    dhrg::VertexId b = grid->grid.followPath(std::span<const int>(path_b, len_b));
    *out = dhrg::gridDistance(grid->grid, a, b);
  });
}

dhrg_status dhrg_graph_read_edge_list(const char* path, dhrg_graph** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    auto g = std::make_shared<dhrg::NetworkGraph>(dhrg::readEdgeListFile(path));
    *out = new dhrg_graph{std::move(g)};
  });
}

dhrg_status dhrg_graph_from_embedding_file(const char* path, dhrg_graph** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    dhrg::EmbeddingFile f = dhrg::readEmbeddingFile(std::string(path));
    auto g = std::make_shared<dhrg::NetworkGraph>(static_cast<int>(f.labels.size()),
                                                  std::vector<std::pair<int, int>>{});
    g->labels = std::move(f.labels);
    *out = new dhrg_graph{std::move(g)};
  });
}

dhrg_status dhrg_graph_write_edge_list(const dhrg_graph* graph, const char* path) {
  return guard([&] {
    need(graph, "graph");
    need(path, "path");
    auto f = openOut(path);
    dhrg::writeEdgeList(f, *graph->graph);
    finish(f, path);
  });
}

dhrg_status dhrg_graph_size(const dhrg_graph* graph, int64_t* vertices, int64_t* edges) {
  return guard([&] {
    need(graph, "graph");
    if (vertices) *vertices = graph->graph->vertexCount();
    if (edges) *edges = static_cast<int64_t>(graph->graph->edgeCount());
  });
}

void dhrg_graph_free(dhrg_graph* graph) { delete graph; }

dhrg_status dhrg_embedding_read(dhrg_grid* grid, const dhrg_graph* graph, const char* path, dhrg_embedding** out) {
  return guard([&] {
    need(grid, "grid");
    need(graph, "graph");
    need(path, "path");
    need(out, "out");
    dhrg::EmbeddingFile f = dhrg::readEmbeddingFile(std::string(path));
    if (f.continuous) dhrg::fail(ErrorKind::InvalidArgument, std::string("'") + path + "' is a continuous embedding");
    if (f.grid != grid->grid.kind())
      dhrg::fail(ErrorKind::InvalidArgument, std::string("'") + path + "' is for grid " +
                                                 std::string(dhrg::gridKindName(f.grid)) + ", not " +
                                                 std::string(dhrg::gridKindName(grid->grid.kind())));
    dhrg::GridEmbedding emb = dhrg::gridFor(f, *graph->graph, grid->grid);
    *out = new dhrg_embedding{grid, graph->graph, std::move(emb), f.R, f.T, f.alpha};
  });
}

dhrg_status dhrg_embedding_write(const dhrg_embedding* emb, const char* path) {
  return guard([&] {
    need(emb, "embedding");
    need(path, "path");
    auto f = openOut(path);
    dhrg::writeEmbeddingFile(f, dhrg::toFile(emb->emb, *emb->graph, emb->grid->grid, emb->R, emb->T, emb->alpha));
    finish(f, path);
  });
}

dhrg_status dhrg_embedding_params(const dhrg_embedding* emb, double* R, double* T, double* alpha) {
  return guard([&] {
    need(emb, "embedding");
    if (R) *R = emb->R;
    if (T) *T = emb->T;
    if (alpha) *alpha = emb->alpha;
  });
}

dhrg_status dhrg_embedding_set_params(dhrg_embedding* emb, double R, double T, double alpha) {
  return guard([&] {
    need(emb, "embedding");
    if (!(R >= 0) || !(T > 0) || !(alpha > 0) || !std::isfinite(R) || !std::isfinite(T) || !std::isfinite(alpha))
      dhrg::fail(ErrorKind::InvalidArgument, "parameters need R >= 0, T > 0, alpha > 0");
    emb->R = R;
    emb->T = T;
    emb->alpha = alpha;
  });
}

dhrg_status dhrg_embedding_max_depth(const dhrg_embedding* emb, int* out) {
  return guard([&] {
    need(emb, "embedding");
    need(out, "out");
    *out = emb->emb.maxDepth(emb->grid->grid);
  });
}

void dhrg_embedding_free(dhrg_embedding* emb) { delete emb; }

dhrg_status dhrg_continuous_read(const dhrg_graph* graph, const char* path, dhrg_continuous** out) {
  return guard([&] {
    need(graph, "graph");
    need(path, "path");
    need(out, "out");
    dhrg::EmbeddingFile f = dhrg::readEmbeddingFile(std::string(path));
    if (!f.continuous) dhrg::fail(ErrorKind::InvalidArgument, std::string("'") + path + "' is a grid embedding");
    *out = new dhrg_continuous{graph->graph, dhrg::continuousFor(f, *graph->graph)};
  });
}

dhrg_status dhrg_continuous_write(const dhrg_continuous* c, const char* path) {
  return guard([&] {
    need(c, "embedding");
    need(path, "path");
    auto f = openOut(path);
    dhrg::writeEmbeddingFile(f, dhrg::toFile(c->c, *c->graph));
    finish(f, path);
  });
}

dhrg_status dhrg_continuous_params(const dhrg_continuous* c, double* R, double* T, double* alpha) {
  return guard([&] {
    need(c, "embedding");
    if (R) *R = c->c.R;
    if (T) *T = c->c.T;
    if (alpha) *alpha = c->c.alpha;
  });
}

dhrg_status dhrg_continuous_log_likelihood(const dhrg_continuous* c, double R, double T, double* out) {
  return guard([&] {
    need(c, "embedding");
    need(out, "out");
    *out = dhrg::continuousLogLikelihood(*c->graph, c->c, R, T);
  });
}

void dhrg_continuous_free(dhrg_continuous* c) { delete c; }

dhrg_status dhrg_convert_to_grid(dhrg_grid* grid, const dhrg_continuous* c, dhrg_embedding** out) {
  return guard([&] {
    need(grid, "grid");
    need(c, "embedding");
    need(out, "out");
    dhrg::GridEmbedding emb = dhrg::hrgToDhrg(grid->grid, c->c);
    double lg = std::log(grid->grid.growthRate());
    *out = new dhrg_embedding{grid, c->graph, std::move(emb), c->c.R / lg, c->c.T / lg, c->c.alpha * lg};
  });
}

dhrg_status dhrg_convert_to_continuous(const dhrg_embedding* emb, dhrg_continuous** out) {
  return guard([&] {
    need(emb, "embedding");
    need(out, "out");
    *out = new dhrg_continuous{emb->graph, dhrg::dhrgToHrg(emb->grid->grid, emb->emb, emb->R, emb->T, emb->alpha)};
  });
}

dhrg_status dhrg_generate(dhrg_grid* grid, const dhrg_params* params, uint64_t seed, dhrg_graph** graph,
                          dhrg_embedding** emb) {
  return guard([&] {
    need(grid, "grid");
    need(params, "params");
    need(graph, "graph");
    dhrg::DhrgParams p{params->n, params->D, params->alpha, params->R, params->T};
    dhrg::Rng rng(seed);
    dhrg::GeneratedGraph g = dhrg::generateGraph(grid->grid, p, rng);
    auto shared = std::make_shared<dhrg::NetworkGraph>(std::move(g.graph));
    auto* gh = new dhrg_graph{shared};
    if (emb) {
      try {
        *emb = new dhrg_embedding{grid, shared, std::move(g.embedding), p.R, p.T, p.alpha};
      } catch (...) {
        delete gh;
        throw;
      }
    }
    *graph = gh;
  });
}

dhrg_status dhrg_tables_compute(const dhrg_embedding* emb, dhrg_tables** out) {
  return guard([&] {
    need(emb, "embedding");
    need(out, "out");
    *out = new dhrg_tables{dhrg::computeTallies(emb->grid->grid, emb->emb, *emb->graph)};
  });
}

dhrg_status dhrg_tables_size(const dhrg_tables* t, size_t* out) {
  return guard([&] {
    need(t, "tables");
    need(out, "out");
    *out = t->t.tally.size();
  });
}

dhrg_status dhrg_tables_get(const dhrg_tables* t, size_t d, int64_t* tally, int64_t* edgetally) {
  return guard([&] {
    need(t, "tables");
    if (d >= t->t.tally.size()) dhrg::fail(ErrorKind::OutOfRange, "distance beyond the tables");
    if (tally) *tally = t->t.tally[d];
    if (edgetally) *edgetally = d < t->t.edgetally.size() ? t->t.edgetally[d] : 0;
  });
}

void dhrg_tables_free(dhrg_tables* t) { delete t; }

dhrg_status dhrg_log_likelihood(const dhrg_tables* t, double R, double T, double* out) {
  return guard([&] {
    need(t, "tables");
    need(out, "out");
    *out = dhrg::logLikelihood(t->t, R, T);
  });
}

dhrg_status dhrg_best_nonparametric(const dhrg_tables* t, double* out) {
  return guard([&] {
    need(t, "tables");
    need(out, "out");
    *out = dhrg::bestNonparametric(t->t);
  });
}

dhrg_status dhrg_trivial_likelihood(int64_t n, int64_t m, double* out) {
  return guard([&] {
    need(out, "out");
    *out = dhrg::trivialLikelihood(n, m);
  });
}

dhrg_status dhrg_placement_likelihood(const dhrg_embedding* emb, double* out) {
  return guard([&] {
    need(emb, "embedding");
    need(out, "out");
    *out = dhrg::placementLikelihood(emb->grid->grid, emb->emb);
  });
}

dhrg_status dhrg_fit_logistic(const dhrg_tables* t, dhrg_fit* out) {
  return guard([&] {
    need(t, "tables");
    need(out, "out");
    dhrg::LogisticFit f = dhrg::fitLogistic(t->t);
    *out = dhrg_fit{f.R, f.T, f.logL, f.gradR, f.gradT, f.boundary ? 1 : 0, f.degenerate ? 1 : 0};
  });
}

dhrg_status dhrg_local_search(const dhrg_embedding* emb, double R, double T, const dhrg_search_options* options,
                              dhrg_sweep_callback progress, void* user, dhrg_search** out) {
  return guard([&] {
    need(emb, "embedding");
    need(out, "out");
    dhrg::LocalSearchOptions o;
    if (options) {
      o.maxIters = options->max_iters;
      o.refit = options->refit != 0;
      if (options->shuffle) o.seed = options->seed;
    }
    auto s = std::make_unique<dhrg_search>();
    s->grid = emb->grid;
    s->graph = emb->graph;
    s->alpha = emb->alpha;
    s->result = dhrg::localSearch(emb->grid->grid, *emb->graph, emb->emb, R, T, o, progress, user);
    *out = s.release();
  });
}

dhrg_status dhrg_search_summary(const dhrg_search* s, int* sweeps, int64_t* moves, double* R, double* T) {
  return guard([&] {
    need(s, "search");
    if (sweeps) *sweeps = s->result.sweeps;
    if (moves) *moves = s->result.moves;
    if (R) *R = s->result.R;
    if (T) *T = s->result.T;
  });
}

dhrg_status dhrg_search_trace_size(const dhrg_search* s, size_t* out) {
  return guard([&] {
    need(s, "search");
    need(out, "out");
    *out = s->result.trace.size();
  });
}

dhrg_status dhrg_search_trace_get(const dhrg_search* s, size_t i, double* log_likelihood, int64_t* moves) {
  return guard([&] {
    need(s, "search");
    if (i >= s->result.trace.size()) dhrg::fail(ErrorKind::OutOfRange, "trace index out of range");
    if (log_likelihood) *log_likelihood = s->result.trace[i];
    if (moves) *moves = i == 0 ? 0 : s->result.movesPerSweep.at(i - 1);
  });
}

dhrg_status dhrg_search_embedding(const dhrg_search* s, dhrg_embedding** out) {
  return guard([&] {
    need(s, "search");
    need(out, "out");
    *out = new dhrg_embedding{s->grid, s->graph, s->result.embedding, s->result.R, s->result.T, s->alpha};
  });
}

void dhrg_search_free(dhrg_search* s) { delete s; }

dhrg_status dhrg_conjecture(dhrg_grid* grid, const int* depths, size_t count, int samples, uint64_t seed,
                            double* means, double* variances, dhrg_conjecture_summary* out) {
  return guard([&] {
    need(grid, "grid");
    need(depths, "depths");
    need(out, "out");
    dhrg::Rng rng(seed);
    dhrg::ConjectureReport r =
        dhrg::conjectureExperiment(grid->grid, std::vector<int>(depths, depths + count), samples, rng);
    for (size_t i = 0; i < r.rows.size(); ++i) {
      if (means) means[i] = r.rows[i].mean;
      if (variances) variances[i] = r.rows[i].variance;
    }
    *out = dhrg_conjecture_summary{r.c1, r.c0, r.varianceSlope, r.skewness, r.excessKurtosis, r.jarqueBera};
  });
}

dhrg_status dhrg_bench(dhrg_grid_kind kind, const char* suite, uint64_t seed, dhrg_report* report) {
  return guard([&] {
    need(suite, "suite");
    need(report, "report");
    dhrg::Report r = dhrg::benchmark(kindOf(kind), suite, seed);
    for (auto& [k, v] : r.meta) report->report.set(k, v);
    for (auto& t : r.tables) report->report.tables.push_back(std::move(t));
  });
}

dhrg_status dhrg_report_new(dhrg_report** out) {
  return guard([&] {
    need(out, "out");
    *out = new dhrg_report{};
  });
}

void dhrg_report_free(dhrg_report* r) { delete r; }

dhrg_status dhrg_report_set(dhrg_report* r, const char* key, const char* value) {
  return guard([&] {
    need(r, "report");
    need(key, "key");
    need(value, "value");
    singleLine(key, "report key");
    singleLine(value, "report value");
    if (std::strchr(key, '=') || !*key) dhrg::fail(ErrorKind::InvalidArgument, "report key must be nonempty without '='");
    r->report.set(key, value);
  });
}

dhrg_status dhrg_report_set_number(dhrg_report* r, const char* key, double value) {
  return guard([&] {
    need(r, "report");
    need(key, "key");
    singleLine(key, "report key");
    if (std::strchr(key, '=') || !*key) dhrg::fail(ErrorKind::InvalidArgument, "report key must be nonempty without '='");
    r->report.set(key, dhrg::formatNumber(value));
  });
}

dhrg_status dhrg_report_add_table(dhrg_report* r, const char* name, const char* columns) {
  return guard([&] {
    need(r, "report");
    need(name, "name");
    need(columns, "columns");
    r->report.tables.push_back(dhrg::ReportTable{name, splitTabs(columns), {}});
  });
}

dhrg_status dhrg_report_add_row(dhrg_report* r, const char* cells) {
  return guard([&] {
    need(r, "report");
    need(cells, "cells");
    if (r->report.tables.empty()) dhrg::fail(ErrorKind::InvalidArgument, "report has no table");
    auto& t = r->report.tables.back();
    auto row = splitTabs(cells);
    if (row.size() != t.columns.size())
      dhrg::fail(ErrorKind::InvalidArgument, "row has " + std::to_string(row.size()) + " cells, table '" + t.name +
                                                 "' has " + std::to_string(t.columns.size()) + " columns");
    t.rows.push_back(std::move(row));
  });
}

dhrg_status dhrg_report_write(const dhrg_report* r, const char* path) {
  return guard([&] {
    need(r, "report");
    if (!path || std::strcmp(path, "-") == 0) {
      dhrg::writeReport(std::cout, r->report);
      std::cout.flush();
      return;
    }
    auto f = openOut(path);
    dhrg::writeReport(f, r->report);
    finish(f, path);
  });
}

dhrg_status dhrg_format_number(double x, char* buf, size_t cap, size_t* needed) {
  return guard([&] { copyOut(dhrg::formatNumber(x), buf, cap, needed); });
}

}  // extern "C"
