// Command-line driver over the dhrg C API.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "dhrg/dhrg.h"

namespace {

// Exit codes: 0 success, 2 invalid input, 3 numeric failure, 1 anything else.
struct Failure {
  int code;
  std::string message;
};

int exitCodeFor(dhrg_status s) {
  switch (s) {
    case DHRG_NUMERIC_ERROR: return 3;
    case DHRG_OUT_OF_MEMORY:
    case DHRG_INTERNAL_ERROR: return 1;
    default: return 2;
  }
}

void check(dhrg_status s, const std::string& what) {
  if (s != DHRG_OK) throw Failure{exitCodeFor(s), what + ": " + dhrg_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using GridPtr = std::unique_ptr<dhrg_grid, Deleter<dhrg_grid, dhrg_grid_free>>;
using GraphPtr = std::unique_ptr<dhrg_graph, Deleter<dhrg_graph, dhrg_graph_free>>;
using EmbeddingPtr = std::unique_ptr<dhrg_embedding, Deleter<dhrg_embedding, dhrg_embedding_free>>;
using ContinuousPtr = std::unique_ptr<dhrg_continuous, Deleter<dhrg_continuous, dhrg_continuous_free>>;
using TablesPtr = std::unique_ptr<dhrg_tables, Deleter<dhrg_tables, dhrg_tables_free>>;
using SearchPtr = std::unique_ptr<dhrg_search, Deleter<dhrg_search, dhrg_search_free>>;

std::string num(double x) {
  char buf[64];
  check(dhrg_format_number(x, buf, sizeof buf, nullptr), "format");
  return buf;
}

class Report {
 public:
  Report() {
    dhrg_report* r = nullptr;
    check(dhrg_report_new(&r), "report");
    r_.reset(r);
  }
  void set(const std::string& k, const std::string& v) { check(dhrg_report_set(r_.get(), k.c_str(), v.c_str()), "report"); }
  void set(const std::string& k, double v) { set(k, num(v)); }
  void set(const std::string& k, long long v) { set(k, std::to_string(v)); }
  void set(const std::string& k, int v) { set(k, std::to_string(v)); }
  void table(const std::string& name, const std::vector<std::string>& columns) {
    check(dhrg_report_add_table(r_.get(), name.c_str(), join(columns).c_str()), "report");
  }
  void row(const std::vector<std::string>& cells) { check(dhrg_report_add_row(r_.get(), join(cells).c_str()), "report"); }
  void write(const std::string& path) { check(dhrg_report_write(r_.get(), path.c_str()), "writing report"); }
  dhrg_report* get() { return r_.get(); }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "\t" : "") + v[i];
    return s;
  }
  std::unique_ptr<dhrg_report, Deleter<dhrg_report, dhrg_report_free>> r_;
};

GridPtr openGrid(const std::string& name) {
  dhrg_grid_kind kind;
  check(dhrg_grid_kind_parse(name.c_str(), &kind), "--grid");
  dhrg_grid* g = nullptr;
  check(dhrg_grid_new(kind, &g), "grid");
  return GridPtr(g);
}

GraphPtr readGraph(const std::string& path) {
  dhrg_graph* g = nullptr;
  check(dhrg_graph_read_edge_list(path.c_str(), &g), "reading " + path);
  return GraphPtr(g);
}

EmbeddingPtr readEmbedding(dhrg_grid* grid, const dhrg_graph* graph, const std::string& path) {
  dhrg_embedding* e = nullptr;
  check(dhrg_embedding_read(grid, graph, path.c_str(), &e), "reading " + path);
  return EmbeddingPtr(e);
}

// Comma-separated integers; empty or "root" is the empty list.
std::vector<int> parseInts(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  if (text.empty() || text == "root") return out;
  size_t start = 0;
  while (true) {
    size_t end = text.find(',', start);
    std::string tok = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Failure{2, flag + ": '" + tok + "' is not an integer"};
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

std::string defaultGrid() {
  const char* env = std::getenv("DHRG_GRID");
  return env && *env ? env : "g67";
}

void addGridOption(CLI::App* sub, std::string& grid) {
  sub->add_option("--grid", grid, "Grid kind: g7 or g67 (default from DHRG_GRID, else g67)")
      ->check(CLI::IsMember({"g7", "g67"}))
      ->capture_default_str();
}

struct GenArgs {
  std::string grid = defaultGrid();
  int n = 0;
  int D = 0;
  double alpha = 0.75;
  double R = 0;
  double T = 0;
  unsigned long long seed = 1;
  std::string outGraph, outEmbedding, report = "-";
};

int runGen(const GenArgs& a) {
  GridPtr grid = openGrid(a.grid);
  dhrg_params p{a.n, a.D, a.alpha, a.R, a.T};
  dhrg_graph* g = nullptr;
  dhrg_embedding* e = nullptr;
  check(dhrg_generate(grid.get(), &p, a.seed, &g, &e), "gen");
  GraphPtr graph(g);
  EmbeddingPtr emb(e);
  check(dhrg_graph_write_edge_list(graph.get(), a.outGraph.c_str()), "writing " + a.outGraph);
  check(dhrg_embedding_write(emb.get(), a.outEmbedding.c_str()), "writing " + a.outEmbedding);
  int64_t n = 0, m = 0;
  check(dhrg_graph_size(graph.get(), &n, &m), "gen");
  Report r;
  r.set("command", "gen");
  r.set("grid", a.grid);
  r.set("seed", std::to_string(a.seed));
  r.set("n", a.n);
  r.set("D", a.D);
  r.set("alpha", a.alpha);
  r.set("R", a.R);
  r.set("T", a.T);
  r.set("vertices", static_cast<long long>(n));
  r.set("edges", static_cast<long long>(m));
  r.set("graph", a.outGraph);
  r.set("embedding", a.outEmbedding);
  r.write(a.report);
  return 0;
}

struct DistArgs {
  std::string grid = defaultGrid();
  std::string pathA, pathB;
};

int runDist(const DistArgs& a) {
  GridPtr grid = openGrid(a.grid);
  auto pa = parseInts(a.pathA, "--path-a");
  auto pb = parseInts(a.pathB, "--path-b");
  int d = 0;
  check(dhrg_grid_distance(grid.get(), pa.data(), pa.size(), pb.data(), pb.size(), &d), "dist");
  std::printf("%d\n", d);
  return 0;
}

struct LikelihoodArgs {
  std::string grid = defaultGrid();
  std::string graph, embedding, report = "-";
  bool fit = false, nonparametric = false, trivial = false, tables = false;
};

int runLikelihood(const LikelihoodArgs& a) {
  if (a.embedding.empty() && !a.trivial) throw Failure{2, "nothing to compute: give --embedding or --trivial"};
  GraphPtr graph = readGraph(a.graph);
  int64_t n = 0, m = 0;
  check(dhrg_graph_size(graph.get(), &n, &m), "graph");
  Report r;
  r.set("command", "likelihood");
  r.set("grid", a.grid);
  r.set("graph", a.graph);
  r.set("vertices", static_cast<long long>(n));
  r.set("edges", static_cast<long long>(m));
  int code = 0;
  if (a.trivial) {
    double l0 = 0;
    check(dhrg_trivial_likelihood(n, m, &l0), "trivial likelihood");
    r.set("trivial", l0);
  }
  if (!a.embedding.empty()) {
    GridPtr grid = openGrid(a.grid);
    EmbeddingPtr emb = readEmbedding(grid.get(), graph.get(), a.embedding);
    r.set("embedding", a.embedding);
    double R = 0, T = 0, alpha = 0;
    check(dhrg_embedding_params(emb.get(), &R, &T, &alpha), "embedding");
    dhrg_tables* t = nullptr;
    check(dhrg_tables_compute(emb.get(), &t), "tallies");
    TablesPtr tables(t);
    r.set("R", R);
    r.set("T", T);
    if (T > 0) {
      double l = 0;
      check(dhrg_log_likelihood(tables.get(), R, T, &l), "likelihood");
      r.set("loglik", l);
    }
    double placement = 0;
    check(dhrg_placement_likelihood(emb.get(), &placement), "placement likelihood");
    r.set("placement", placement);
    if (a.nonparametric) {
      double best = 0;
      check(dhrg_best_nonparametric(tables.get(), &best), "nonparametric likelihood");
      r.set("nonparametric", best);
    }
    if (a.fit) {
      dhrg_fit f{};
      check(dhrg_fit_logistic(tables.get(), &f), "fit");
      r.set("fit_R", f.R);
      r.set("fit_T", f.T);
      r.set("fit_loglik", f.log_likelihood);
      r.set("fit_grad_R", f.grad_R);
      r.set("fit_grad_T", f.grad_T);
      r.set("fit_boundary", f.boundary);
      r.set("fit_degenerate", f.degenerate);
      if (f.boundary || f.degenerate) {
        std::fprintf(stderr, "dhrg: fit did not reach an interior optimum\n");
        code = 3;
      }
    }
    if (a.tables) {
      size_t size = 0;
      check(dhrg_tables_size(tables.get(), &size), "tables");
      r.table("tally", {"d", "tally", "edgetally"});
      for (size_t d = 0; d < size; ++d) {
        int64_t x = 0, y = 0;
        check(dhrg_tables_get(tables.get(), d, &x, &y), "tables");
        r.row({std::to_string(d), std::to_string(x), std::to_string(y)});
      }
    }
  } else if (a.fit || a.nonparametric || a.tables) {
    throw Failure{2, "--fit, --nonparametric and --tables need --embedding"};
  }
  r.write(a.report);
  return code;
}

struct SearchArgs {
  std::string grid = defaultGrid();
  std::string graph, embedding, outEmbedding, trace, report = "-";
  int maxIters = 30;
  unsigned long long seed = 0;
  bool seeded = false;
  bool noRefit = false;
  bool quiet = false;
  double R = NAN, T = NAN;
};

void progress(int sweep, int64_t moves, double logL, void* user) {
  if (*static_cast<bool*>(user)) return;
  std::fprintf(stderr, "sweep %d: %lld moves, logL = %s\n", sweep, static_cast<long long>(moves), num(logL).c_str());
}

int runSearch(SearchArgs& a) {
  GridPtr grid = openGrid(a.grid);
  GraphPtr graph = readGraph(a.graph);
  EmbeddingPtr emb = readEmbedding(grid.get(), graph.get(), a.embedding);
  double R = 0, T = 0;
  check(dhrg_embedding_params(emb.get(), &R, &T, nullptr), "embedding");
  if (!std::isnan(a.R)) R = a.R;
  if (!std::isnan(a.T)) T = a.T;
  dhrg_search_options o{a.maxIters, a.noRefit ? 0 : 1, a.seeded ? 1 : 0, a.seed};
  dhrg_search* s = nullptr;
  check(dhrg_local_search(emb.get(), R, T, &o, progress, &a.quiet, &s), "local search");
  SearchPtr search(s);
  int sweeps = 0;
  int64_t moves = 0;
  double fR = 0, fT = 0;
  check(dhrg_search_summary(search.get(), &sweeps, &moves, &fR, &fT), "local search");
  size_t steps = 0;
  check(dhrg_search_trace_size(search.get(), &steps), "local search");
  double first = 0, last = 0;
  check(dhrg_search_trace_get(search.get(), 0, &first, nullptr), "local search");
  check(dhrg_search_trace_get(search.get(), steps - 1, &last, nullptr), "local search");

  dhrg_embedding* out = nullptr;
  check(dhrg_search_embedding(search.get(), &out), "local search");
  EmbeddingPtr result(out);
  check(dhrg_embedding_write(result.get(), a.outEmbedding.c_str()), "writing " + a.outEmbedding);

  Report r;
  r.set("command", "localsearch");
  r.set("grid", a.grid);
  r.set("seed", a.seeded ? std::to_string(a.seed) : std::string("none"));
  r.set("max_iters", a.maxIters);
  r.set("refit", a.noRefit ? 0 : 1);
  r.set("sweeps", sweeps);
  r.set("moves", static_cast<long long>(moves));
  r.set("start_R", R);
  r.set("start_T", T);
  r.set("R", fR);
  r.set("T", fT);
  r.set("initial_loglik", first);
  r.set("final_loglik", last);
  r.set("embedding", a.outEmbedding);
  if (!a.trace.empty()) {
    Report tr;
    tr.set("command", "localsearch");
    tr.set("seed", a.seeded ? std::to_string(a.seed) : std::string("none"));
    tr.table("trace", {"sweep", "moves", "loglik"});
    for (size_t i = 0; i < steps; ++i) {
      double l = 0;
      int64_t mv = 0;
      check(dhrg_search_trace_get(search.get(), i, &l, &mv), "local search");
      tr.row({std::to_string(i), std::to_string(mv), num(l)});
    }
    tr.write(a.trace);
  }
  r.write(a.report);
  return 0;
}

struct ConvertArgs {
  std::string grid = defaultGrid();
  std::string direction, embedding, out, graph;
};

int runConvert(const ConvertArgs& a) {
  GridPtr grid = openGrid(a.grid);
  dhrg_graph* g = nullptr;
  if (a.graph.empty())
    check(dhrg_graph_from_embedding_file(a.embedding.c_str(), &g), "reading " + a.embedding);
  else
    check(dhrg_graph_read_edge_list(a.graph.c_str(), &g), "reading " + a.graph);
  GraphPtr graph(g);
  if (a.direction == "to-grid") {
    dhrg_continuous* c = nullptr;
    check(dhrg_continuous_read(graph.get(), a.embedding.c_str(), &c), "reading " + a.embedding);
    ContinuousPtr cont(c);
    dhrg_embedding* e = nullptr;
    check(dhrg_convert_to_grid(grid.get(), cont.get(), &e), "convert");
    EmbeddingPtr emb(e);
    check(dhrg_embedding_write(emb.get(), a.out.c_str()), "writing " + a.out);
  } else {
    EmbeddingPtr emb = readEmbedding(grid.get(), graph.get(), a.embedding);
    dhrg_continuous* c = nullptr;
    check(dhrg_convert_to_continuous(emb.get(), &c), "convert");
    ContinuousPtr cont(c);
    check(dhrg_continuous_write(cont.get(), a.out.c_str()), "writing " + a.out);
  }
  return 0;
}

struct ConjectureArgs {
  std::string grid = defaultGrid();
  std::string depths = "10,20,40";
  int samples = 10000;
  unsigned long long seed = 1;
  std::string report = "-";
};

int runConjecture(const ConjectureArgs& a) {
  GridPtr grid = openGrid(a.grid);
  auto depths = parseInts(a.depths, "--depths");
  std::vector<double> means(depths.size()), vars(depths.size());
  dhrg_conjecture_summary s{};
  check(dhrg_conjecture(grid.get(), depths.data(), depths.size(), a.samples, a.seed, means.data(), vars.data(), &s),
        "conjecture");
  double gamma = 0;
  check(dhrg_grid_growth_rate(grid.get(), &gamma), "grid");
  Report r;
  r.set("command", "conjecture");
  r.set("grid", a.grid);
  r.set("seed", std::to_string(a.seed));
  r.set("samples", a.samples);
  r.set("log_gamma", std::log(gamma));
  r.set("c1", s.c1);
  r.set("c0", s.c0);
  r.set("c1_over_log_gamma", s.c1 / std::log(gamma));
  r.set("variance_slope", s.variance_slope);
  r.set("skewness", s.skewness);
  r.set("excess_kurtosis", s.excess_kurtosis);
  r.set("jarque_bera", s.jarque_bera);
  r.table("depths", {"depth", "mean", "variance"});
  for (size_t i = 0; i < depths.size(); ++i) r.row({std::to_string(depths[i]), num(means[i]), num(vars[i])});
  r.write(a.report);
  return 0;
}

struct BenchArgs {
  std::string grid = defaultGrid();
  std::string suite;
  unsigned long long seed = 1;
  std::string report = "-";
};

int runBench(const BenchArgs& a) {
  dhrg_grid_kind kind;
  check(dhrg_grid_kind_parse(a.grid.c_str(), &kind), "--grid");
  Report r;
  r.set("command", "bench");
  check(dhrg_bench(kind, a.suite.c_str(), a.seed, r.get()), "bench");
  r.write(a.report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete hyperbolic random graphs: generation, likelihood, embedding search"};
  app.set_version_flag("--version", dhrg_version());
  app.require_subcommand(1);

  GenArgs gen;
  auto* genCmd = app.add_subcommand("gen", "Generate a random graph with its grid embedding");
  addGridOption(genCmd, gen.grid);
  genCmd->add_option("--n", gen.n, "Number of vertices")->required()->check(CLI::PositiveNumber);
  genCmd->add_option("--alpha", gen.alpha, "Radial density exponent (grid units)")->capture_default_str();
  genCmd->add_option("--R", gen.R, "Distance at which the edge probability is 1/2 (grid units)")->required();
  genCmd->add_option("--T", gen.T, "Temperature (grid units)")->required();
  genCmd->add_option("--D", gen.D, "Maximum depth of a vertex")->required()->check(CLI::NonNegativeNumber);
  genCmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  genCmd->add_option("--out-graph", gen.outGraph, "Edge list output")->required();
  genCmd->add_option("--out-embedding", gen.outEmbedding, "Grid embedding output")->required();
  genCmd->add_option("--report", gen.report, "Report output ('-' for stdout)")->capture_default_str();

  DistArgs dist;
  auto* distCmd = app.add_subcommand("dist", "Grid distance between two vertices given as child-index paths");
  addGridOption(distCmd, dist.grid);
  distCmd->add_option("--path-a", dist.pathA, "Comma-separated child indices from the root ('' or 'root' for the root)")
      ->required();
  distCmd->add_option("--path-b", dist.pathB, "Second path, same form")->required();

  LikelihoodArgs lik;
  auto* likCmd = app.add_subcommand("likelihood", "Log-likelihood of a graph under a grid embedding");
  addGridOption(likCmd, lik.grid);
  likCmd->add_option("--graph", lik.graph, "Edge list")->required();
  likCmd->add_option("--embedding", lik.embedding, "Grid embedding (needed for everything but --trivial)");
  likCmd->add_flag("--fit", lik.fit, "Fit R and T by maximum likelihood");
  likCmd->add_flag("--nonparametric", lik.nonparametric, "Best likelihood over arbitrary edge probabilities per distance");
  likCmd->add_flag("--trivial", lik.trivial, "Likelihood of the Erdos-Renyi model with the same density");
  likCmd->add_flag("--tables", lik.tables, "Include the pair and edge counts per distance");
  likCmd->add_option("--report", lik.report, "Report output ('-' for stdout)")->capture_default_str();

  SearchArgs search;
  auto* searchCmd = app.add_subcommand("localsearch", "Improve a grid embedding by moving vertices to neighbours");
  addGridOption(searchCmd, search.grid);
  searchCmd->add_option("--graph", search.graph, "Edge list")->required();
  searchCmd->add_option("--embedding", search.embedding, "Starting grid embedding")->required();
  searchCmd->add_option("--max-iters", search.maxIters, "Maximum number of sweeps")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  auto* seedOpt = searchCmd->add_option("--seed", search.seed, "Shuffle the visiting order with this seed");
  searchCmd->add_option("--out-embedding", search.outEmbedding, "Improved embedding output")->required();
  searchCmd->add_option("--trace", search.trace, "Write the per-sweep log-likelihood table here");
  searchCmd->add_option("--R", search.R, "Starting R (default: from the embedding file)");
  searchCmd->add_option("--T", search.T, "Starting T (default: from the embedding file)");
  searchCmd->add_flag("--no-refit", search.noRefit, "Keep R and T fixed instead of refitting after each sweep");
  searchCmd->add_flag("--quiet", search.quiet, "No progress on standard error");
  searchCmd->add_option("--report", search.report, "Report output ('-' for stdout)")->capture_default_str();

  ConvertArgs conv;
  auto* convCmd = app.add_subcommand("convert", "Convert between continuous and grid embeddings");
  addGridOption(convCmd, conv.grid);
  convCmd->add_option("--direction", conv.direction, "to-grid or to-continuous")
      ->required()
      ->check(CLI::IsMember({"to-grid", "to-continuous"}));
  convCmd->add_option("--embedding", conv.embedding, "Input embedding")->required();
  convCmd->add_option("--out", conv.out, "Output embedding")->required();
  convCmd->add_option("--graph", conv.graph, "Edge list whose vertices the embedding covers (default: the file's own)");

  ConjectureArgs conj;
  auto* conjCmd = app.add_subcommand("conjecture", "Distribution of hyperbolic radii of uniform ring vertices");
  addGridOption(conjCmd, conj.grid);
  conjCmd->add_option("--depths", conj.depths, "Comma-separated ring depths")->capture_default_str();
  conjCmd->add_option("--samples", conj.samples, "Samples per depth")->capture_default_str()->check(CLI::PositiveNumber);
  conjCmd->add_option("--seed", conj.seed, "Random seed")->capture_default_str();
  conjCmd->add_option("--report", conj.report, "Report output ('-' for stdout)")->capture_default_str();

  BenchArgs bench;
  auto* benchCmd = app.add_subcommand("bench", "Timing and scaling tables");
  addGridOption(benchCmd, bench.grid);
  benchCmd->add_option("--suite", bench.suite, "dist, tally or gen")
      ->required()
      ->check(CLI::IsMember({"dist", "tally", "gen"}));
  benchCmd->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  benchCmd->add_option("--report", bench.report, "Report output ('-' for stdout)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*genCmd) return runGen(gen);
    if (*distCmd) return runDist(dist);
    if (*likCmd) return runLikelihood(lik);
    if (*searchCmd) {
      search.seeded = seedOpt->count() > 0;
      return runSearch(search);
    }
    if (*convCmd) return runConvert(conv);
    if (*conjCmd) return runConjecture(conj);
    if (*benchCmd) return runBench(bench);
  } catch (const Failure& f) {
    std::fprintf(stderr, "dhrg: %s\n", f.message.c_str());
    return f.code;
  }
  return 2;
}
