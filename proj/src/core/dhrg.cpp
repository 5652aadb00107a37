#include "dhrg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "error.hpp"

namespace dhrg {
namespace {

// ln(1 + e^x) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logisticArg(double d, double R, double T) { return (d - R) / (2 * T); }

bool finitePositive(double x) { return std::isfinite(x) && x > 0; }

template <class F>
double goldenMax(F&& f, double lo, double hi, double tol) {
  const double invPhi = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - invPhi * (b - a), d = a + invPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invPhi * (b - a);
      fd = f(d);
    }
  }
  // The endpoints are candidates too: the maximum may sit on the boundary.
  double best = (a + b) / 2, fbest = f(best);
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx > fbest) {
      best = x;
      fbest = fx;
    }
  }
  return best;
}

}  // namespace

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void DhrgParams::validate() const {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be at least 1");
  if (D < 0) fail(ErrorKind::InvalidArgument, "D must be nonnegative");
  if (D >= kMaxDepth) fail(ErrorKind::OutOfRange, "D exceeds the grid depth limit");
  if (!finitePositive(alpha)) fail(ErrorKind::InvalidArgument, "alpha must be positive and finite");
  if (!std::isfinite(R) || R < 0) fail(ErrorKind::InvalidArgument, "R must be nonnegative and finite");
  if (!finitePositive(T)) fail(ErrorKind::InvalidArgument, "T must be positive and finite");
}

NetworkGraph::NetworkGraph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n < 0) fail(ErrorKind::InvalidArgument, "negative vertex count");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      fail(ErrorKind::InvalidArgument, "edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
    if (u > v) std::swap(u, v);
  }
  std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  adj_.assign(static_cast<size_t>(n), {});
  for (auto [u, v] : edges_) {
    adj_[static_cast<size_t>(u)].push_back(v);
    adj_[static_cast<size_t>(v)].push_back(u);
  }
}

std::string NetworkGraph::label(int v) const {
  if (labels.empty()) return std::to_string(v);
  return labels.at(static_cast<size_t>(v));
}

int GridEmbedding::maxDepth(const Grid& grid) const {
  int d = 0;
  for (auto v : at) d = std::max(d, grid.depth(v));
  return d;
}

std::int64_t LikelihoodTables::pairCount() const { return std::accumulate(tally.begin(), tally.end(), std::int64_t{0}); }
std::int64_t LikelihoodTables::edgeCount() const {
  return std::accumulate(edgetally.begin(), edgetally.end(), std::int64_t{0});
}

void LikelihoodTables::check() const {
  if (tally.size() != edgetally.size()) fail(ErrorKind::Internal, "tally tables differ in length");
  for (size_t d = 0; d < tally.size(); ++d)
    if (edgetally[d] < 0 || edgetally[d] > tally[d])
      fail(ErrorKind::Internal, "bucket " + std::to_string(d) + " has " + std::to_string(edgetally[d]) +
                                    " edges among " + std::to_string(tally[d]) + " pairs");
}

double edgeProbability(double d, double R, double T) {
  const double x = logisticArg(d, R, T);
  if (x > 0) {
    const double e = std::exp(-x);
    return e / (1 + e);
  }
  return 1 / (1 + std::exp(x));
}

double logEdgeProbability(double d, double R, double T) { return -softplus(logisticArg(d, R, T)); }
double logNonEdgeProbability(double d, double R, double T) { return -softplus(-logisticArg(d, R, T)); }

int sampleDepth(double alpha, int D, Rng& rng) {
  if (D <= 0) return 0;
  // k = D - d is truncated geometric with ratio e^(-alpha); invert its CDF.
  const double total = -std::expm1(-alpha * (D + 1));
  const double u = uniform01(rng);
  const double k = std::ceil(std::log1p(-u * total) / -alpha) - 1;
  const int kk = std::clamp(static_cast<int>(std::max(k, 0.0)), 0, D);
  return D - kk;
}

VertexId sampleRingVertex(Grid& grid, int d, Rng& rng) {
  if (d < 0) fail(ErrorKind::InvalidArgument, "negative depth");
  VertexId v = grid.root();
  std::vector<double> weights;
  for (int k = 0; k < d; ++k) {
    // Non-rightmost children partition the descendants of v at depth d.
    const auto& kids = grid.spec().type(grid.typeOf(v)).childTypes;
    weights.clear();
    double total = 0;
    for (int t : kids) {
      total += grid.descendantWeight(t, d - k - 1);
      weights.push_back(total);
    }
    const double u = uniform01(rng) * total;
    int i = static_cast<int>(std::upper_bound(weights.begin(), weights.end(), u) - weights.begin());
    i = std::min(i, static_cast<int>(kids.size()) - 1);
    v = grid.child(v, i);
  }
  return v;
}

VertexId sampleVertex(Grid& grid, double alpha, int D, Rng& rng) {
  return sampleRingVertex(grid, sampleDepth(alpha, D, rng), rng);
}

GeneratedGraph generateGraph(Grid& grid, const DhrgParams& params, Rng& rng) {
  params.validate();
  GeneratedGraph out;
  const auto n = static_cast<size_t>(params.n);
  out.embedding.at.reserve(n);
  for (size_t i = 0; i < n; ++i) out.embedding.at.push_back(sampleVertex(grid, params.alpha, params.D, rng));

  // Vertices are added one at a time; each new vertex is paired with the earlier ones, so every
  // unordered pair is seen once. A bucket of k pairs at distance d keeps each pair with
  // probability p(d), by jumping over geometrically distributed runs of rejected pairs.
  DistanceTallyCounter<std::int64_t> counter(grid);
  std::unordered_map<std::uint32_t, std::vector<int>> occupants;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> logMiss;
  for (size_t i = 0; i < n; ++i) {
    const VertexId v = out.embedding.at[i];
    if (i > 0) {
      for (const auto& node : counter.collectClose(v)) {
        const auto counts = counter.counts(node.seg);
        const int base = counter.countBase(node.seg);
        for (size_t idx = 0; idx < counts.size(); ++idx) {
          const std::int64_t k = counts[idx];
          if (k <= 0) continue;
          const int c = base + static_cast<int>(idx);
          const auto d = static_cast<size_t>(node.level + c + node.best);
          while (logMiss.size() <= d)
            logMiss.push_back(logNonEdgeProbability(static_cast<double>(logMiss.size()), params.R, params.T));
          const double lq = logMiss[d];
          if (lq == 0) continue;  // p(d) underflows to 0
          std::int64_t j = 0;
          for (;;) {
            const double skip = std::floor(std::log(1 - uniform01(rng)) / lq);
            if (skip >= static_cast<double>(k - j)) break;
            j += static_cast<std::int64_t>(skip) + 1;
            if (auto t = counter.traceOwned(node.seg, c, j)) {
              const int u = occupants.at(t->vertex.value).at(static_cast<size_t>(t->offset - 1));
              edges.emplace_back(u, static_cast<int>(i));
            }
          }
        }
      }
    }
    counter.add(v, 1);
    occupants[v.value].push_back(static_cast<int>(i));
  }
  out.graph = NetworkGraph(params.n, std::move(edges));
  return out;
}

LikelihoodTables computeTallies(Grid& grid, const GridEmbedding& emb, const NetworkGraph& graph) {
  if (emb.at.size() != static_cast<size_t>(graph.vertexCount()))
    fail(ErrorKind::InvalidArgument, "embedding covers " + std::to_string(emb.at.size()) + " vertices, graph has " +
                                         std::to_string(graph.vertexCount()));
  const int D = emb.maxDepth(grid);
  LikelihoodTables t;
  t.tally.assign(static_cast<size_t>(2 * D + 1), 0);
  t.edgetally.assign(static_cast<size_t>(2 * D + 1), 0);
  DistanceTallyCounter<std::int64_t> counter(grid);
  for (size_t i = 0; i < emb.at.size(); ++i) {
    if (i > 0) {
      const auto h = counter.tally(emb.at[i]);
      for (size_t d = 0; d < h.size() && d < t.tally.size(); ++d) t.tally[d] += h[d];
    }
    counter.add(emb.at[i], 1);
  }
  for (auto [u, v] : graph.edges())
    ++t.edgetally[static_cast<size_t>(gridDistance(grid, emb.at[static_cast<size_t>(u)], emb.at[static_cast<size_t>(v)]))];
  return t;
}

double logLikelihood(const LikelihoodTables& t, double R, double T) {
  if (!std::isfinite(R) || !(T > 0) || !std::isfinite(T))
    fail(ErrorKind::InvalidArgument, "need finite R and T > 0");
  double sum = 0;
  for (size_t d = 0; d < t.tally.size(); ++d) {
    const auto n = t.tally[d];
    if (n == 0) continue;
    const auto e = t.edgetally[d];
    const double x = static_cast<double>(d);
    if (e > 0) sum += static_cast<double>(e) * logEdgeProbability(x, R, T);
    if (n > e) sum += static_cast<double>(n - e) * logNonEdgeProbability(x, R, T);
  }
  return sum;
}

double bestNonparametric(const LikelihoodTables& t) {
  double sum = 0;
  for (size_t d = 0; d < t.tally.size(); ++d) {
    const auto n = t.tally[d];
    const auto e = t.edgetally[d];
    if (n == 0 || e == 0 || e == n) continue;
    const double p = static_cast<double>(e) / static_cast<double>(n);
    sum += static_cast<double>(e) * std::log(p) + static_cast<double>(n - e) * std::log1p(-p);
  }
  return sum;
}

double trivialLikelihood(std::int64_t n, std::int64_t m) {
  if (n < 0 || m < 0) fail(ErrorKind::InvalidArgument, "negative counts");
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2;
  if (static_cast<double>(m) > pairs) fail(ErrorKind::InvalidArgument, "more edges than pairs");
  if (m == 0 || static_cast<double>(m) == pairs) return 0;
  const double q = static_cast<double>(m) / pairs;
  return static_cast<double>(m) * std::log(q) + (pairs - static_cast<double>(m)) * std::log1p(-q);
}

double placementLikelihood(Grid& grid, const GridEmbedding& emb) {
  if (emb.at.empty()) fail(ErrorKind::InvalidArgument, "empty embedding");
  std::vector<std::int64_t> perDepth;
  for (auto v : emb.at) {
    const auto d = static_cast<size_t>(grid.depth(v));
    if (perDepth.size() <= d) perDepth.resize(d + 1, 0);
    ++perDepth[d];
  }
  const double n = static_cast<double>(emb.at.size());
  double sum = 0;
  for (size_t d = 0; d < perDepth.size(); ++d) {
    if (perDepth[d] == 0) continue;
    const double k = static_cast<double>(perDepth[d]);
    sum += k * (std::log(k / n) - logBig(grid.ringSize(static_cast<int>(d))));
  }
  return sum;
}

LogisticFit fitLogistic(const LikelihoodTables& t, std::optional<double> Rmax) {
  t.check();
  LogisticFit fit;
  fit.Rmax = Rmax ? *Rmax : std::max(1.0, static_cast<double>(t.tally.size()) - 1);
  if (!(fit.Rmax > 0)) fail(ErrorKind::InvalidArgument, "Rmax must be positive");
  auto f = [&](double R, double T) { return logLikelihood(t, R, T); };

  bool anyPair = false, anyEdge = false, anyNonEdge = false;
  for (size_t d = 0; d < t.tally.size(); ++d) {
    anyPair |= t.tally[d] > 0;
    anyEdge |= t.edgetally[d] > 0;
    anyNonEdge |= t.edgetally[d] < t.tally[d];
  }
  if (!anyPair) fail(ErrorKind::InvalidArgument, "tables contain no pairs");
  if (!anyEdge || !anyNonEdge) {
    // Every bucket is pure; the likelihood only approaches its supremum at the boundary.
    fit.degenerate = true;
    fit.boundary = true;
    fit.R = anyEdge ? fit.Rmax : 0;
    fit.T = kMinT;
    fit.logL = f(fit.R, fit.T);
    return fit;
  }

  // Coarse grid, then coordinate descent from the best few points. For fixed T the likelihood is
  // concave in R, and for fixed R it is unimodal in T, so each line search is a golden section.
  const double lnMin = std::log(kMinT), lnMax = std::log(kMaxT);
  struct Point {
    double R, T, L;
  };
  std::vector<Point> coarse;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double R = fit.Rmax * i / 15.0;
      const double T = std::exp(lnMin + (lnMax - lnMin) * j / 15.0);
      coarse.push_back({R, T, f(R, T)});
    }
  std::partial_sort(coarse.begin(), coarse.begin() + 5, coarse.end(),
                    [](const Point& a, const Point& b) { return a.L > b.L; });
  Point best = coarse.front();
  for (int s = 0; s < 5; ++s) {
    Point p = coarse[static_cast<size_t>(s)];
    for (int iter = 0; iter < 200; ++iter) {
      const double before = p.L;
      p.R = goldenMax([&](double R) { return f(R, p.T); }, 0, fit.Rmax, 1e-10 * fit.Rmax);
      p.T = std::exp(goldenMax([&](double s2) { return f(p.R, std::exp(s2)); }, lnMin, lnMax, 1e-11));
      p.L = f(p.R, p.T);
      if (p.L - before <= 1e-14 * std::abs(before)) break;
    }
    if (p.L > best.L) best = p;
  }

  // In a = 1/(2T), b = -R/(2T) the exponent is a*d + b, and the likelihood is concave, so Newton
  // steps finish what the line searches leave.
  double a = 1 / (2 * best.T), b = -best.R / (2 * best.T);
  auto fab = [&](double aa, double bb) { return aa > 0 ? f(-bb / aa, 1 / (2 * aa)) : -HUGE_VAL; };
  double Lab = fab(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    double ga = 0, gb = 0, haa = 0, hab = 0, hbb = 0;
    for (size_t d = 0; d < t.tally.size(); ++d) {
      const auto n = static_cast<double>(t.tally[d]);
      if (n == 0) continue;
      const double x = static_cast<double>(d);
      const double p = 1 / (1 + std::exp(a * x + b));
      const double r = n * p - static_cast<double>(t.edgetally[d]);
      const double w = n * p * (1 - p);
      ga += r * x;
      gb += r;
      haa -= w * x * x;
      hab -= w * x;
      hbb -= w;
    }
    const double det = haa * hbb - hab * hab;
    if (!(det > 0)) break;
    double da = -(hbb * ga - hab * gb) / det;
    double db = -(haa * gb - hab * ga) / det;
    double step = 1;
    bool improved = false;
    for (int k = 0; k < 40; ++k, step /= 2) {
      const double L2 = fab(a + step * da, b + step * db);
      if (L2 >= Lab) {
        a += step * da;
        b += step * db;
        improved = L2 > Lab;
        Lab = L2;
        break;
      }
    }
    if (!improved || std::abs(step * da) <= 1e-15 * std::abs(a)) break;
  }
  if (a > 0) {
    const double R = -b / a, T = 1 / (2 * a);
    if (R >= 0 && R <= fit.Rmax && T >= kMinT && T <= kMaxT && Lab >= best.L) best = {R, T, Lab};
  }

  fit.R = best.R;
  fit.T = best.T;
  fit.logL = best.L;
  const double hR = 1e-4 * std::max(1.0, fit.R);
  const double hT = 1e-4 * fit.T;
  const double scale = std::max(1.0, std::abs(fit.logL));
  fit.gradR = (f(fit.R + hR, fit.T) - f(fit.R - hR, fit.T)) / (2 * hR) * std::max(1.0, fit.R) / scale;
  fit.gradT = (f(fit.R, fit.T + hT) - f(fit.R, fit.T - hT)) / (2 * hT) * std::max(1.0, fit.T) / scale;
  const double eps = 1e-6;
  fit.boundary = fit.R <= eps * fit.Rmax || fit.R >= (1 - eps) * fit.Rmax || fit.T <= kMinT * (1 + eps) ||
                 fit.T >= kMaxT * (1 - eps);
  return fit;
}

LikelihoodContext::LikelihoodContext(Grid& grid, const NetworkGraph& graph, GridEmbedding emb, double R, double T)
    : grid_(&grid), graph_(&graph), emb_(std::move(emb)), R_(R), T_(T), counter_(grid) {
  if (!std::isfinite(R) || !finitePositive(T)) fail(ErrorKind::InvalidArgument, "invalid R or T");
  tables_ = computeTallies(grid, emb_, graph);
  for (auto v : emb_.at) counter_.add(v, 1);
}

void LikelihoodContext::setParameters(double R, double T) {
  if (!std::isfinite(R) || !finitePositive(T)) fail(ErrorKind::InvalidArgument, "invalid R or T");
  R_ = R;
  T_ = T;
  lnp_.clear();
  ln1mp_.clear();
}

void LikelihoodContext::ensureTable(std::size_t size) {
  if (tables_.tally.size() < size) {
    tables_.tally.resize(size, 0);
    tables_.edgetally.resize(size, 0);
  }
}

double LikelihoodContext::lnp(std::size_t d) {
  while (lnp_.size() <= d) lnp_.push_back(logEdgeProbability(static_cast<double>(lnp_.size()), R_, T_));
  return lnp_[d];
}

double LikelihoodContext::ln1mp(std::size_t d) {
  while (ln1mp_.size() <= d) ln1mp_.push_back(logNonEdgeProbability(static_cast<double>(ln1mp_.size()), R_, T_));
  return ln1mp_[d];
}

double LikelihoodContext::deltaMove(int v, VertexId w) {
  if (v < 0 || v >= graph_->vertexCount()) fail(ErrorKind::OutOfRange, "vertex " + std::to_string(v) + " out of range");
  const VertexId old = emb_.at[static_cast<size_t>(v)];
  if (w == old) return 0;
  // Pairs of v with everyone else, before and after; v itself is still registered at old.
  auto before = counter_.tally(old);
  before[0] -= 1;
  auto after = counter_.tally(w);
  after[static_cast<size_t>(gridDistance(*grid_, w, old))] -= 1;
  double delta = 0;
  const size_t len = std::max(before.size(), after.size());
  for (size_t d = 0; d < len; ++d) {
    const std::int64_t change = (d < after.size() ? after[d] : 0) - (d < before.size() ? before[d] : 0);
    if (change != 0) delta += static_cast<double>(change) * ln1mp(d);
  }
  for (int u : graph_->neighbors(v)) {
    const VertexId mu = emb_.at[static_cast<size_t>(u)];
    const auto dOld = static_cast<size_t>(gridDistance(*grid_, old, mu));
    const auto dNew = static_cast<size_t>(gridDistance(*grid_, w, mu));
    delta += (lnp(dNew) - ln1mp(dNew)) - (lnp(dOld) - ln1mp(dOld));
  }
  return delta;
}

void LikelihoodContext::applyMove(int v, VertexId w) {
  if (v < 0 || v >= graph_->vertexCount()) fail(ErrorKind::OutOfRange, "vertex " + std::to_string(v) + " out of range");
  const VertexId old = emb_.at[static_cast<size_t>(v)];
  if (w == old) return;
  auto before = counter_.tally(old);
  before[0] -= 1;
  auto after = counter_.tally(w);
  after[static_cast<size_t>(gridDistance(*grid_, w, old))] -= 1;
  ensureTable(std::max(before.size(), after.size()));
  for (size_t d = 0; d < before.size(); ++d) tables_.tally[d] -= before[d];
  for (size_t d = 0; d < after.size(); ++d) tables_.tally[d] += after[d];
  for (int u : graph_->neighbors(v)) {
    const VertexId mu = emb_.at[static_cast<size_t>(u)];
    const auto dOld = static_cast<size_t>(gridDistance(*grid_, old, mu));
    const auto dNew = static_cast<size_t>(gridDistance(*grid_, w, mu));
    --tables_.edgetally[dOld];
    ++tables_.edgetally[dNew];
  }
  counter_.add(old, -1);
  counter_.add(w, 1);
  emb_.at[static_cast<size_t>(v)] = w;
}

LocalSearchResult localSearch(Grid& grid, const NetworkGraph& graph, const GridEmbedding& emb, double R, double T,
                              const LocalSearchOptions& options, SweepCallback progress, void* user) {
  if (options.maxIters < 1) fail(ErrorKind::InvalidArgument, "maxIters must be at least 1");
  LikelihoodContext ctx(grid, graph, emb, R, T);
  LocalSearchResult result;
  result.trace.push_back(ctx.logLikelihood());
  std::vector<int> order(static_cast<size_t>(graph.vertexCount()));
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::optional<Rng> rng;
  if (options.seed) rng.emplace(*options.seed);
  for (int sweep = 1; sweep <= options.maxIters; ++sweep) {
    if (rng)
      for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[static_cast<size_t>(uniform01(*rng) * static_cast<double>(i))]);
    std::int64_t moves = 0;
    for (int v : order) {
      const VertexId cur = ctx.embedding().at[static_cast<size_t>(v)];
      // Ignore gains that are within rounding of the total.
      double bestGain = 1e-10 * std::max(1.0, std::abs(ctx.logLikelihood()));
      std::optional<VertexId> target;
      for (VertexId w : grid.neighbors(cur)) {
        const double gain = ctx.deltaMove(v, w);
        if (gain > bestGain) {
          bestGain = gain;
          target = w;
        }
      }
      if (target) {
        ctx.applyMove(v, *target);
        ++moves;
      }
    }
    if (options.refit) {
      const auto fit = fitLogistic(ctx.tables());
      if (!fit.degenerate && fit.logL > ctx.logLikelihood()) ctx.setParameters(fit.R, fit.T);
    }
    result.sweeps = sweep;
    result.moves += moves;
    result.movesPerSweep.push_back(moves);
    result.trace.push_back(ctx.logLikelihood());
    if (progress) progress(sweep, moves, result.trace.back(), user);
    if (moves == 0) break;
  }
  result.embedding = ctx.embedding();
  result.R = ctx.R();
  result.T = ctx.T();
  return result;
}

int depthBoundForRadius(const Grid& grid, double r) {
  const double shortest = grid.spec().distinctEdgeLengths().front();
  return 2 * static_cast<int>(std::ceil(r / shortest)) + 4;
}

GridEmbedding hrgToDhrg(Grid& grid, const ContinuousEmbedding& c) {
  GridEmbedding out;
  out.at.reserve(c.at.size());
  for (const auto& p : c.at) out.at.push_back(grid.nearestVertex(polarToPoint(p), depthBoundForRadius(grid, p.r)));
  return out;
}

ContinuousEmbedding dhrgToHrg(Grid& grid, const GridEmbedding& emb, double R, double T, double alpha) {
  const double scale = std::log(grid.growthRate());
  ContinuousEmbedding out;
  out.at.reserve(emb.at.size());
  double rmax = 0;
  for (auto v : emb.at) {
    out.at.push_back(pointToPolar(grid.embed(v)));
    rmax = std::max(rmax, out.at.back().r);
  }
  // R doubles as the disk radius, so it has to cover every converted point.
  out.R = std::max(R * scale, rmax);
  out.T = T * scale;
  out.alpha = alpha / scale;
  return out;
}

double continuousLogLikelihood(const NetworkGraph& graph, const ContinuousEmbedding& c, double R, double T) {
  const auto n = static_cast<size_t>(graph.vertexCount());
  if (c.at.size() != n) fail(ErrorKind::InvalidArgument, "embedding does not match the graph");
  std::vector<HPoint> pts;
  pts.reserve(n);
  for (const auto& p : c.at) pts.push_back(polarToPoint(p));
  double sum = 0;
  for (size_t u = 0; u < n; ++u) {
    const auto& nb = graph.neighbors(static_cast<int>(u));
    size_t k = 0;
    for (size_t v = u + 1; v < n; ++v) {
      while (k < nb.size() && static_cast<size_t>(nb[k]) < v) ++k;
      const bool edge = k < nb.size() && static_cast<size_t>(nb[k]) == v;
      const double d = hypDistance(pts[u], pts[v]);
      sum += edge ? logEdgeProbability(d, R, T) : logNonEdgeProbability(d, R, T);
    }
  }
  return sum;
}

ConjectureReport conjectureExperiment(Grid& grid, const std::vector<int>& depths, int samplesPerDepth, Rng& rng) {
  if (depths.size() < 2) fail(ErrorKind::InvalidArgument, "need at least two depths");
  if (samplesPerDepth < 2) fail(ErrorKind::InvalidArgument, "need at least two samples per depth");
  ConjectureReport rep;
  std::vector<std::pair<int, double>> all;
  for (int d : depths) {
    if (d < 0) fail(ErrorKind::InvalidArgument, "negative depth");
    double sum = 0, sq = 0;
    for (int s = 0; s < samplesPerDepth; ++s) {
      const double r = hypDistance(kOrigin, grid.embed(sampleRingVertex(grid, d, rng)));
      all.emplace_back(d, r);
      sum += r;
      sq += r * r;
    }
    ConjectureRow row;
    row.depth = d;
    row.samples = samplesPerDepth;
    row.mean = sum / samplesPerDepth;
    row.variance = std::max(0.0, (sq - sum * row.mean) / (samplesPerDepth - 1));
    rep.rows.push_back(row);
  }
  auto leastSquares = [](const std::vector<std::pair<double, double>>& xy) {
    double mx = 0, my = 0;
    for (auto [x, y] : xy) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(xy.size());
    my /= static_cast<double>(xy.size());
    double sxy = 0, sxx = 0;
    for (auto [x, y] : xy) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    if (sxx == 0) fail(ErrorKind::InvalidArgument, "depths must not all be equal");
    const double slope = sxy / sxx;
    return std::make_pair(slope, my - slope * mx);
  };
  std::vector<std::pair<double, double>> xy;
  for (auto [d, r] : all) xy.emplace_back(d, r);
  std::tie(rep.c1, rep.c0) = leastSquares(xy);
  xy.clear();
  for (const auto& row : rep.rows) xy.emplace_back(row.depth, row.variance);
  rep.varianceSlope = leastSquares(xy).first;

  std::vector<double> z;
  for (auto [d, r] : all)
    if (d > 0) z.push_back((r - rep.c1 * d - rep.c0) / std::sqrt(static_cast<double>(d)));
  if (z.size() > 3) {
    double m = 0;
    for (double x : z) m += x;
    m /= static_cast<double>(z.size());
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : z) {
      const double e = x - m;
      m2 += e * e;
      m3 += e * e * e;
      m4 += e * e * e * e;
    }
    const auto n = static_cast<double>(z.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0) {
      rep.skewness = m3 / std::pow(m2, 1.5);
      rep.excessKurtosis = m4 / (m2 * m2) - 3;
      rep.jarqueBera = n / 6 * (rep.skewness * rep.skewness + rep.excessKurtosis * rep.excessKurtosis / 4);
    }
  }
  return rep;
}

}  // namespace dhrg
