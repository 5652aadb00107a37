#include "bench.hpp"

#include <chrono>
#include <string>

#include "error.hpp"

namespace dhrg {
namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string str(double x) { return formatNumber(x); }

void distSuite(GridKind kind, Rng& rng, Report& r) {
  ReportTable t{"dist", {"depth", "pairs", "mean_distance", "ns_per_call"}, {}};
  for (int depth : {4, 8, 16, 32, 64, 128}) {
    Grid grid(kind);
    constexpr int kPairs = 2000;
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (int i = 0; i < kPairs; ++i) pairs.emplace_back(sampleRingVertex(grid, depth, rng), sampleRingVertex(grid, depth, rng));
    // Warm-up materializes the ancestor chains, so the timed loop measures the walk alone.
    long total = 0;
    for (auto [a, b] : pairs) total += gridDistance(grid, a, b);
    auto t0 = Clock::now();
    for (auto [a, b] : pairs) gridDistance(grid, a, b);
    double s = since(t0);
    t.rows.push_back({std::to_string(depth), std::to_string(kPairs), str(static_cast<double>(total) / kPairs),
                      str(s / kPairs * 1e9)});
  }
  r.tables.push_back(std::move(t));
}

void tallySuite(GridKind kind, Rng& rng, Report& r) {
  ReportTable t{"tally", {"depth", "vertices", "queries", "add_ns", "tally_ns"}, {}};
  for (int depth : {8, 16, 32, 64}) {
    TallyTiming tm = timeAddTally(kind, depth, 2000, 200, rng);
    t.rows.push_back({std::to_string(depth), std::to_string(tm.vertices), std::to_string(tm.queries),
                      str(tm.addSeconds * 1e9), str(tm.tallySeconds * 1e9)});
  }
  r.tables.push_back(std::move(t));
}

void genSuite(GridKind kind, Rng& rng, Report& r) {
  ReportTable t{"gen", {"n", "D", "R", "T", "alpha", "edges", "seconds"}, {}};
  const int D = kind == GridKind::G7 ? 12 : 20;
  const double R = 1.2 * D;
  for (int n : {1000, 4000, 16000}) {
    Grid grid(kind);
    DhrgParams p{n, D, 0.75, R, 0.6};
    auto t0 = Clock::now();
    auto g = generateGraph(grid, p, rng);
    double s = since(t0);
    t.rows.push_back({std::to_string(n), std::to_string(D), str(R), str(p.T), str(p.alpha),
                      std::to_string(g.graph.edgeCount()), str(s)});
  }
  r.tables.push_back(std::move(t));
}

}  // namespace

TallyTiming timeAddTally(GridKind kind, int depth, int vertices, int queries, Rng& rng) {
  if (depth < 0 || vertices < 1 || queries < 1) fail(ErrorKind::InvalidArgument, "timeAddTally: bad sizes");
  Grid grid(kind);
  std::vector<VertexId> added, probes;
  for (int i = 0; i < vertices; ++i) added.push_back(sampleRingVertex(grid, depth, rng));
  for (int i = 0; i < queries; ++i) probes.push_back(sampleRingVertex(grid, depth, rng));
  DistanceTallyCounter<std::int64_t> counter(grid);
  TallyTiming out{depth, vertices, queries, 0, 0};
  auto t0 = Clock::now();
  for (VertexId v : added) counter.add(v, 1);
  out.addSeconds = since(t0) / vertices;
  std::int64_t check = 0;
  t0 = Clock::now();
  for (VertexId w : probes)
    for (std::int64_t x : counter.tally(w)) check += x;
  out.tallySeconds = since(t0) / queries;
  if (check != static_cast<std::int64_t>(vertices) * queries) fail(ErrorKind::Internal, "timeAddTally: mass mismatch");
  return out;
}

Report benchmark(GridKind kind, std::string_view suite, std::uint64_t seed) {
  Report r;
  r.set("suite", std::string(suite));
  r.set("grid", std::string(gridKindName(kind)));
  r.set("seed", std::to_string(seed));
  Rng rng(seed);
  if (suite == "dist") distSuite(kind, rng, r);
  else if (suite == "tally") tallySuite(kind, rng, r);
  else if (suite == "gen") genSuite(kind, rng, r);
  else fail(ErrorKind::InvalidArgument, "unknown benchmark suite '" + std::string(suite) + "' (dist, tally, gen)");
  return r;
}

}  // namespace dhrg
