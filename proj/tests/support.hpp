#pragma once

#include <cstdint>
#include <vector>

#include "dhrg.hpp"
#include "grid.hpp"
#include "griddist.hpp"

namespace testsupport {

using namespace dhrg;

// Every vertex of B_depth, ring by ring, each ring in counter-clockwise order.
inline std::vector<VertexId> ball(Grid& g, int depth) {
  std::vector<VertexId> out{g.root()};
  VertexId start = g.root();
  for (int k = 1; k <= depth; ++k) {
    start = g.childLeftmost(start);
    VertexId x = start;
    do {
      out.push_back(x);
      x = g.succ(x);
    } while (x != start);
  }
  return out;
}

// Breadth-first distances from src over grid edges, restricted to vertices of depth <= limit.
inline std::vector<int> bfs(Grid& g, VertexId src, int limit) {
  std::vector<int> dist(g.materializedCount(), -1);
  std::vector<VertexId> queue{src};
  dist[src.value] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    VertexId x = queue[head];
    for (VertexId y : g.neighbors(x)) {
      if (g.depth(y) > limit) continue;
      if (y.value >= dist.size()) dist.resize(g.materializedCount(), -1);
      if (dist[y.value] < 0) {
        dist[y.value] = dist[x.value] + 1;
        queue.push_back(y);
      }
    }
  }
  dist.resize(g.materializedCount(), -1);
  return dist;
}

// Random walk down from the root through uniformly chosen children; depth uniform in [0, maxDepth].
template <class R>
VertexId randomVertex(Grid& g, R& rng, int maxDepth) {
  int d = static_cast<int>(rng() % static_cast<std::uint64_t>(maxDepth + 1));
  VertexId v = g.root();
  for (int i = 0; i < d; ++i) v = g.child(v, static_cast<int>(rng() % static_cast<std::uint64_t>(g.childCount(v))));
  return v;
}

// Pair histogram by direct pairwise gridDistance.
inline LikelihoodTables bruteTables(Grid& g, const GridEmbedding& emb, const NetworkGraph& graph) {
  LikelihoodTables t;
  auto bump = [](std::vector<std::int64_t>& v, int d) {
    if (static_cast<size_t>(d) >= v.size()) v.resize(static_cast<size_t>(d) + 1, 0);
    ++v[static_cast<size_t>(d)];
  };
  const int n = graph.vertexCount();
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) bump(t.tally, gridDistance(g, emb.at[static_cast<size_t>(u)], emb.at[static_cast<size_t>(v)]));
  for (auto [u, v] : graph.edges())
    bump(t.edgetally, gridDistance(g, emb.at[static_cast<size_t>(u)], emb.at[static_cast<size_t>(v)]));
  return t;
}

inline std::int64_t at(const std::vector<std::int64_t>& v, size_t i) { return i < v.size() ? v[i] : 0; }

}  // namespace testsupport
