#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "grid.hpp"
#include "griddist.hpp"
#include "hypgeom.hpp"

namespace dhrg {

using Rng = std::mt19937_64;

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(Rng& rng);

struct DhrgParams {
  int n = 1;
  int D = 1;
  double alpha = 0.75;
  double R = 1;
  double T = 0.5;

  void validate() const;
};

// Simple undirected graph on [0, n). Edges are stored once as (u, v) with u < v, sorted.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  // Drops self-loops and duplicates; direction is ignored.
  NetworkGraph(int n, std::vector<std::pair<int, int>> edges);

  int vertexCount() const { return n_; }
  std::size_t edgeCount() const { return edges_.size(); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_.at(static_cast<size_t>(v)); }

  // External names of the vertices; empty means the dense ids themselves.
  std::vector<std::string> labels;
  std::string label(int v) const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

struct GridEmbedding {
  std::vector<VertexId> at;
  int maxDepth(const Grid& grid) const;
};

struct ContinuousEmbedding {
  std::vector<PolarCoord> at;
  double R = 0;
  double T = 0;
  double alpha = 0;
};

// Tally[d]: pairs of vertices at grid distance d; Edgetally[d]: those joined by an edge. Each
// unordered pair is counted once.
struct LikelihoodTables {
  std::vector<std::int64_t> tally;
  std::vector<std::int64_t> edgetally;

  std::int64_t pairCount() const;
  std::int64_t edgeCount() const;
  // Throws if a bucket is negative or has more edges than pairs.
  void check() const;
};

double edgeProbability(double d, double R, double T);
// ln p(d) and ln(1 - p(d)), stable for any |d - R| / T.
double logEdgeProbability(double d, double R, double T);
double logNonEdgeProbability(double d, double R, double T);

// Depth d in [0, D] with probability proportional to e^(alpha d).
int sampleDepth(double alpha, int D, Rng& rng);
// Uniform vertex of ring d, by descending from the root.
VertexId sampleRingVertex(Grid& grid, int d, Rng& rng);
VertexId sampleVertex(Grid& grid, double alpha, int D, Rng& rng);

struct GeneratedGraph {
  NetworkGraph graph;
  GridEmbedding embedding;
};
GeneratedGraph generateGraph(Grid& grid, const DhrgParams& params, Rng& rng);

LikelihoodTables computeTallies(Grid& grid, const GridEmbedding& emb, const NetworkGraph& graph);

double logLikelihood(const LikelihoodTables& t, double R, double T);
double bestNonparametric(const LikelihoodTables& t);
double trivialLikelihood(std::int64_t n, std::int64_t m);
double placementLikelihood(Grid& grid, const GridEmbedding& emb);

struct LogisticFit {
  double R = 0;
  double T = 0;
  double logL = 0;
  // Central-difference gradient, scaled by max(1, |parameter|) / max(1, |logL|).
  double gradR = 0;
  double gradT = 0;
  // The optimum was not interior to [0, Rmax] x [1e-3, 10], or the tables carry no information.
  bool boundary = false;
  bool degenerate = false;
  double Rmax = 0;
};
inline constexpr double kMinT = 1e-3;
inline constexpr double kMaxT = 10;
// Rmax defaults to the largest distance the tables can hold.
LogisticFit fitLogistic(const LikelihoodTables& t, std::optional<double> Rmax = std::nullopt);

// Tally counter, tables and embedding kept in sync for single-vertex moves.
class LikelihoodContext {
 public:
  LikelihoodContext(Grid& grid, const NetworkGraph& graph, GridEmbedding emb, double R, double T);

  double deltaMove(int v, VertexId w);
  void applyMove(int v, VertexId w);
  void setParameters(double R, double T);

  double logLikelihood() const { return dhrg::logLikelihood(tables_, R_, T_); }
  const LikelihoodTables& tables() const { return tables_; }
  const GridEmbedding& embedding() const { return emb_; }
  double R() const { return R_; }
  double T() const { return T_; }

 private:
  void ensureTable(std::size_t size);
  double lnp(std::size_t d);
  double ln1mp(std::size_t d);

  Grid* grid_;
  const NetworkGraph* graph_;
  GridEmbedding emb_;
  double R_;
  double T_;
  DistanceTallyCounter<std::int64_t> counter_;
  LikelihoodTables tables_;
  std::vector<double> lnp_;
  std::vector<double> ln1mp_;
};

struct LocalSearchOptions {
  int maxIters = 30;
  // Refit R and T after every sweep; the trace stays nondecreasing because the fit is a maximum.
  bool refit = true;
  // Visit vertices in a fresh random order each sweep; index order when empty.
  std::optional<std::uint64_t> seed;
};
struct LocalSearchResult {
  GridEmbedding embedding;
  int sweeps = 0;
  std::int64_t moves = 0;
  // logL before the first sweep, then after each sweep.
  std::vector<double> trace;
  std::vector<std::int64_t> movesPerSweep;
  double R = 0;
  double T = 0;
};
using SweepCallback = void (*)(int sweep, std::int64_t moves, double logL, void* user);
LocalSearchResult localSearch(Grid& grid, const NetworkGraph& graph, const GridEmbedding& emb, double R, double T,
                              const LocalSearchOptions& options, SweepCallback progress = nullptr,
                              void* user = nullptr);

// Grid parameters are continuous ones divided by log(gamma); alpha is multiplied by it. The
// continuous R is raised if needed so that it bounds every radius.
GridEmbedding hrgToDhrg(Grid& grid, const ContinuousEmbedding& c);
ContinuousEmbedding dhrgToHrg(Grid& grid, const GridEmbedding& emb, double R, double T, double alpha);
// Deepest grid level the greedy descent may need for a point at radius r.
int depthBoundForRadius(const Grid& grid, double r);
// Direct sum over all pairs in the continuous model.
double continuousLogLikelihood(const NetworkGraph& graph, const ContinuousEmbedding& c, double R, double T);

struct ConjectureRow {
  int depth = 0;
  int samples = 0;
  double mean = 0;
  double variance = 0;
};
struct ConjectureReport {
  std::vector<ConjectureRow> rows;
  double c1 = 0;
  double c0 = 0;
  // Least-squares slope of the variance against depth.
  double varianceSlope = 0;
  // Moments of the pooled residuals (r - c1 d - c0) / sqrt(d), and the Jarque-Bera statistic.
  double skewness = 0;
  double excessKurtosis = 0;
  double jarqueBera = 0;
};
ConjectureReport conjectureExperiment(Grid& grid, const std::vector<int>& depths, int samplesPerDepth, Rng& rng);

}  // namespace dhrg
