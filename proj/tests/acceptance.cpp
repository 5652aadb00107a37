// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion; arguments select criteria by
// number (default: all). Exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "bench.hpp"
#include "dhrg.hpp"
#include "griddist.hpp"
#include "io.hpp"

using namespace dhrg;

namespace {

// Tolerances and limits.
constexpr double kDistanceSeconds = 60;
constexpr double kTallySeconds = 30;
constexpr double kGrowthSeconds = 1;
constexpr double kGrowthTolerance = 0.005;
constexpr double kTrivialTolerance = 1;
constexpr double kConjectureSeconds = 120;
constexpr double kConjectureC1Max = 1.2;  // times log(gamma)
constexpr double kVarRatioMin = 1.5, kVarRatioMax = 2.5;
constexpr double kRecoverySeconds = 120;
constexpr double kRecoveryR = 0.05, kRecoveryT = 0.10;
constexpr int kRecoveryNeeded = 4;
constexpr double kSearchSeconds = 300;
constexpr int kSearchMaxSweeps = 30;
constexpr double kSearchTolerance = 0.01;
constexpr double kDeltaTolerance = 1e-6;
constexpr double kScaleSeconds = 600;
constexpr double kScaleMegabytes = 4096;
constexpr double kScaleRatio = 4.5;
constexpr double kReferenceTolerance = 0.02;
constexpr double kLogGammaTolerance = 0.15;

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

double peakMegabytes() {
  std::ifstream f("/proc/self/status");
  std::string line;
  while (std::getline(f, line))
    if (line.rfind("VmHWM:", 0) == 0) return std::atof(line.c_str() + 6) / 1024;
  return 0;
}

struct Outcome {
  enum { Pass, Fail, Skip } status;
  std::string detail;
};

Outcome verdict(bool ok, const std::string& detail) { return {ok ? Outcome::Pass : Outcome::Fail, detail}; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Exhaustive distances inside B_depth. Sources are restricted to one of the root's seven sectors
// and each unordered pair of sectors is visited once; the 7-fold rotation covers the rest.
Outcome distanceOracle(GridKind kind, int depth, long& pairs) {
  Grid g(kind);
  g.freeze(depth);
  const auto n = static_cast<std::uint32_t>(g.materializedCount());
  std::vector<int> sector(n, -1);
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::uint32_t i = 1; i < n; ++i) {
    const VertexId v{i};
    sector[i] = g.depth(v) == 1 ? g.childIndex(v) : sector[g.parentRight(v)->value];
    const auto s = g.succ(v);
    adj[i].push_back(s.value);
    adj[s.value].push_back(i);
    for (auto p : g.parents(v)) {
      adj[i].push_back(p.value);
      adj[p.value].push_back(i);
    }
  }
  std::vector<std::uint32_t> offset(n + 1, 0), flat;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
    offset[i + 1] = offset[i] + static_cast<std::uint32_t>(adj[i].size());
    flat.insert(flat.end(), adj[i].begin(), adj[i].end());
    std::vector<std::uint32_t>().swap(adj[i]);
  }
  std::vector<std::uint32_t> sources{0};
  for (std::uint32_t i = 1; i < n; ++i)
    if (sector[i] == 0) sources.push_back(i);
  std::vector<std::uint8_t> dist(n);
  std::vector<std::uint32_t> queue(n);
  long bad = 0;
  for (auto s : sources) {
    std::fill(dist.begin(), dist.end(), 255);
    size_t head = 0, tail = 0;
    queue[tail++] = s;
    dist[s] = 0;
    while (head < tail) {
      const auto x = queue[head++];
      for (auto k = offset[x]; k < offset[x + 1]; ++k)
        if (dist[flat[k]] == 255) {
          dist[flat[k]] = static_cast<std::uint8_t>(dist[x] + 1);
          queue[tail++] = flat[k];
        }
    }
    for (std::uint32_t t = 1; t < n; ++t) {
      if (s != 0 && (sector[t] > 3 || (sector[t] == 0 && t < s))) continue;
      ++pairs;
      if (gridDistance(g, VertexId{s}, VertexId{t}) != dist[t]) ++bad;
    }
  }
  return verdict(bad == 0, fmt("%s B%d: %u vertices, %ld mismatches", std::string(gridKindName(kind)).c_str(), depth,
                               n, bad));
}

Outcome criterion1() {
  const double t0 = now();
  long pairs = 0;
  auto a = distanceOracle(GridKind::G7, 10, pairs);
  auto b = distanceOracle(GridKind::G67, 12, pairs);
  const double t = now() - t0;
  const bool ok = a.status == Outcome::Pass && b.status == Outcome::Pass && t < kDistanceSeconds;
  return verdict(ok, a.detail + "; " + b.detail + fmt("; %ld pairs", pairs));
}

VertexId randomVertex(Grid& g, Rng& rng, int maxDepth) {
  const int d = static_cast<int>(rng() % static_cast<std::uint64_t>(maxDepth + 1));
  VertexId v = g.root();
  for (int i = 0; i < d; ++i) v = g.child(v, static_cast<int>(rng() % static_cast<std::uint64_t>(g.childCount(v))));
  return v;
}

Outcome criterion2() {
  const double t0 = now();
  long bad = 0;
  Rng rng(2);
  for (GridKind kind : {GridKind::G7, GridKind::G67}) {
    Grid g(kind);
    DistanceTallyCounter<std::int64_t> counter(g);
    std::vector<std::pair<VertexId, std::int64_t>> added;
    for (int i = 0; i < 300; ++i) {
      const auto v = randomVertex(g, rng, 12);
      const auto k = static_cast<std::int64_t>(rng() % 9) - 4;
      counter.add(v, k);
      added.emplace_back(v, k);
    }
    for (int q = 0; q < 50; ++q) {
      const auto w = randomVertex(g, rng, 12);
      const auto got = counter.tally(w);
      std::vector<std::int64_t> want(got.size() + 64, 0);
      for (auto [v, k] : added) want[static_cast<size_t>(gridDistance(g, v, w))] += k;
      for (size_t d = 0; d < want.size(); ++d)
        if ((d < got.size() ? got[d] : 0) != want[d]) ++bad;
    }
  }
  const double t = now() - t0;
  return verdict(bad == 0 && t < kTallySeconds, fmt("300 vertices, 50 queries per grid, %ld differing buckets", bad));
}

Outcome criterion3() {
  const double t0 = now();
  auto ratio = [](GridKind kind, int k) {
    Grid g(kind);
    return static_cast<double>(g.ringSizeSaturated(k)) / static_cast<double>(g.ringSizeSaturated(k - 1));
  };
  const double a = ratio(GridKind::G7, 30), b = ratio(GridKind::G67, 50);
  const double ea = std::abs(a / 2.6180339 - 1), eb = std::abs(b / 1.72208 - 1);
  const double t = now() - t0;
  return verdict(ea <= kGrowthTolerance && eb <= kGrowthTolerance && t < kGrowthSeconds,
                 fmt("G7 k=30 ratio %.9f (rel err %.1e), G67 k=50 ratio %.9f (rel err %.1e)", a, ea, b, eb));
}

Outcome criterion4() {
  const double a = trivialLikelihood(4039, 88234), b = trivialLikelihood(74946, 537952);
  const bool okA = std::abs(a + 487133) <= kTrivialTolerance, okB = std::abs(b + 4364526) <= kTrivialTolerance;
  return verdict(okA && okB, fmt("L0(4039, 88234) = %.3f [%s, want -487133]; L0(74946, 537952) = %.3f [%s, want -4364526]",
                                 a, okA ? "ok" : "off", b, okB ? "ok" : "off"));
}

Outcome criterion5() {
  const double t0 = now();
  Grid g(GridKind::G67);
  Rng rng(5);
  const auto rep = conjectureExperiment(g, {10, 20, 40}, 10000, rng);
  const double lg = std::log(g.growthRate());
  const double ratio = rep.rows[2].variance / rep.rows[1].variance;
  const double t = now() - t0;
  const bool ok = rep.c1 >= lg && rep.c1 <= kConjectureC1Max * lg && ratio >= kVarRatioMin && ratio <= kVarRatioMax &&
                  t < kConjectureSeconds;
  return verdict(ok, fmt("c1 = %.5f (%.4f log gamma), Var(40)/Var(20) = %.3f, skewness %.3f, excess kurtosis %.3f",
                         rep.c1, rep.c1 / lg, ratio, rep.skewness, rep.excessKurtosis));
}

constexpr int kSynthN = 2000, kSynthD = 12;
DhrgParams synthetic() { return {kSynthN, kSynthD, 0.75, 0.75 * kSynthD, 0.6}; }

Outcome criterion6() {
  const double t0 = now();
  const auto p = synthetic();
  int passed = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Grid g(GridKind::G7);
    Rng rng(seed);
    const auto gen = generateGraph(g, p, rng);
    const auto fit = fitLogistic(computeTallies(g, gen.embedding, gen.graph));
    const double eR = fit.R / p.R - 1, eT = fit.T / p.T - 1;
    const bool ok = std::abs(eR) <= kRecoveryR && std::abs(eT) <= kRecoveryT && !fit.boundary;
    passed += ok;
    detail += fmt("%sseed %d R %+.1f%% T %+.1f%%", seed > 1 ? ", " : "", static_cast<int>(seed), 100 * eR, 100 * eT);
  }
  const double t = now() - t0;
  return verdict(passed >= kRecoveryNeeded && t < kRecoverySeconds,
                 fmt("G7 D=%d n=%d: %d/5 recovered (", kSynthD, kSynthN, passed) + detail + ")");
}

Outcome criterion7() {
  const double t0 = now();
  const auto p = synthetic();
  Grid g(GridKind::G7);
  Rng rng(7);
  const auto gen = generateGraph(g, p, rng);
  const auto truth = fitLogistic(computeTallies(g, gen.embedding, gen.graph));

  // 10% of the vertices take a 3-step random walk on the grid.
  GridEmbedding perturbed = gen.embedding;
  int displaced = 0;
  for (auto& v : perturbed.at) {
    if (uniform01(rng) >= 0.1) continue;
    for (int s = 0; s < 3; ++s) {
      const auto nb = g.neighbors(v);
      v = nb[rng() % nb.size()];
    }
    ++displaced;
  }
  const auto start = fitLogistic(computeTallies(g, perturbed, gen.graph));
  const auto res = localSearch(g, gen.graph, perturbed, start.R, start.T, {kSearchMaxSweeps, true, std::nullopt});
  bool monotone = true;
  for (size_t i = 1; i < res.trace.size(); ++i) monotone &= res.trace[i] >= res.trace[i - 1];
  // The generating embedding is not a local optimum, so the search may end above its logL. The
  // reference is the same search started from the unperturbed embedding.
  const auto ref = localSearch(g, gen.graph, gen.embedding, truth.R, truth.T, {kSearchMaxSweeps, true, std::nullopt});
  const double final = res.trace.back();
  const double scale = std::abs(truth.logL);
  const bool notWorse = final >= truth.logL - kSearchTolerance * scale;
  const double gap = std::abs(final - ref.trace.back()) / std::abs(ref.trace.back());
  const double t = now() - t0;
  return verdict(monotone && res.sweeps <= kSearchMaxSweeps && notWorse && gap <= kSearchTolerance && t < kSearchSeconds,
                 fmt("%d displaced; logL %.2f -> %.2f in %d sweeps (%lld moves), trace %s; unperturbed %.2f "
                     "(final is %+.2f%%); search from unperturbed %.2f (gap %.3f%%)",
                     displaced, res.trace.front(), final, res.sweeps, static_cast<long long>(res.moves),
                     monotone ? "nondecreasing" : "DECREASES", truth.logL, 100 * (final - truth.logL) / scale,
                     ref.trace.back(), 100 * gap));
}

Outcome criterion8() {
  Grid g(GridKind::G67);
  Rng rng(8);
  const DhrgParams p{200, 14, 0.75, 10.5, 0.6};
  const auto gen = generateGraph(g, p, rng);
  LikelihoodContext ctx(g, gen.graph, gen.embedding, p.R, p.T);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const int v = static_cast<int>(rng() % 200);
    const auto nb = g.neighbors(ctx.embedding().at[static_cast<size_t>(v)]);
    const VertexId w = k % 2 ? nb[rng() % nb.size()] : sampleVertex(g, p.alpha, p.D, rng);
    const double before = ctx.logLikelihood();
    const double delta = ctx.deltaMove(v, w);
    GridEmbedding moved = ctx.embedding();
    moved.at[static_cast<size_t>(v)] = w;
    const double full = logLikelihood(computeTallies(g, moved, gen.graph), p.R, p.T);
    worst = std::max(worst, std::abs(full - before - delta));
    ctx.applyMove(v, w);
  }
  return verdict(worst <= kDeltaTolerance, fmt("50 moves, worst |delta - recomputed| = %.2e", worst));
}

Outcome criterion9() {
  const double t0 = now();
  Grid g(GridKind::G7);
  Rng rng(9);
  const DhrgParams p{100000, 30, 0.75, 36, 0.6};
  const auto gen = generateGraph(g, p, rng);
  const double genSeconds = now() - t0;
  const double mb = peakMegabytes();
  // Best of three per depth, to damp scheduling noise.
  auto perCall = [&](int depth) {
    double best = INFINITY;
    for (int r = 0; r < 3; ++r) {
      const auto tt = timeAddTally(GridKind::G7, depth, 2000, 200, rng);
      best = std::min(best, tt.addSeconds + tt.tallySeconds);
    }
    return best;
  };
  const double a = perCall(30), b = perCall(60);
  const double ratio = b / a;
  return verdict(genSeconds < kScaleSeconds && mb < kScaleMegabytes && ratio <= kScaleRatio,
                 fmt("G7 n=1e5 D=30 R=36: %zu edges in %.1f s, peak %.0f MB; Add+Tally %.2f us at depth 30, %.2f us at 60 "
                     "(ratio %.2f)",
                     gen.graph.edgeCount(), genSeconds, mb, 1e6 * a, 1e6 * b, ratio));
}

// Needs the archived continuous embedding of the 4039-vertex network and its edge list.
Outcome criterion10() {
  const char* graphPath = std::getenv("DHRG_ARCHIVE_GRAPH");
  const char* embPath = std::getenv("DHRG_ARCHIVE_EMBEDDING");
  if (!graphPath || !embPath)
    return {Outcome::Skip, "set DHRG_ARCHIVE_GRAPH and DHRG_ARCHIVE_EMBEDDING to the archived edge list and "
                           "continuous embedding; criteria 1-9 stand alone"};
  const auto graph = readEdgeListFile(graphPath);
  const auto c = continuousFor(readEmbeddingFile(std::string(embPath)), graph);
  Grid g(GridKind::G67);
  const auto emb = hrgToDhrg(g, c);
  const auto tables = computeTallies(g, emb, graph);
  const auto fit = fitLogistic(tables);
  const double L4 = bestNonparametric(tables);
  // Reference L3 is negative; it is sometimes quoted without the sign.
  const double eL3 = std::abs(fit.logL / -179125 - 1), eL4 = std::abs(L4 / -177033 - 1);
  const double lg = std::log(g.growthRate());
  const double rR = 11.09358 / fit.R, rT = 0.54336 / fit.T;
  const bool ok = eL3 <= kReferenceTolerance && eL4 <= kReferenceTolerance && std::abs(rR / lg - 1) <= kLogGammaTolerance &&
                  std::abs(rT / lg - 1) <= kLogGammaTolerance;
  return verdict(ok, fmt("L3 = %.0f (R3 %.4f, T3 %.4f), L4 = %.0f, R2/R3 = %.4f, T2/T3 = %.4f, log gamma = %.4f",
                         fit.logL, fit.R, fit.T, L4, rR, rT, lg));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"distance oracle", criterion1},   {"tally oracle", criterion2},       {"growth rates", criterion3},
      {"trivial likelihood", criterion4}, {"radius distribution", criterion5}, {"parameter recovery", criterion6},
      {"local search", criterion7},      {"deltaMove oracle", criterion8},   {"scaling", criterion9},
      {"reference numbers", criterion10},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const double t0 = now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Fail ? "FAIL" : "SKIP";
    failures += o.status == Outcome::Fail;
    std::printf("%s %2d %-20s %8.2f s  %s\n", tag, id, criteria[i].first, now() - t0, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
