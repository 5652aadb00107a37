#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "grid.hpp"

namespace dhrg {

// Exact graph distance between two grid vertices in O(distance).
//
// Both vertices are pushed towards the root along their leftmost and rightmost ancestors; at every
// common level the two ancestor segments are compared, and if they overlap or lie within the
// grid's offset bound of each other the path "up, sideways, down" is a candidate. The loop stops as
// soon as the combined height reaches the best candidate.
int gridDistance(Grid& grid, VertexId v, VertexId w);

struct SegmentId {
  std::uint32_t value = 0;
  friend bool operator==(SegmentId, SegmentId) = default;
};

// Distance tally counter: a function f on grid vertices supporting Add(v, k) and
// Tally(w)[d] = sum of f(u) over u at distance d from w, in O(depth^2) per call.
//
// Every vertex with nonzero mass activates its chain of ancestor segments P^d([v,v]); each active
// segment S keeps counts a(S)[c] = mass added at depth level(S) + c below it. A query walks the
// ancestor segments of w and collects the active segments close to them; each added vertex is
// attributed to the deepest close segment on its own chain, which is where its shortest path turns.
//
// A counter is single-threaded: queries reuse per-segment scratch space.
template <class W>
class DistanceTallyCounter {
 public:
  explicit DistanceTallyCounter(Grid& grid);

  void add(VertexId v, W k);
  std::vector<W> tally(VertexId w);

  Grid& grid() { return *grid_; }
  int maxDepth() const { return maxDepth_; }
  W totalWeight() const { return total_; }

  struct SegmentView {
    VertexId left;
    VertexId right;
    int level;
    int length;
    std::optional<SegmentId> parent;
    std::span<const std::uint32_t> children;
  };
  std::size_t segmentCount() const { return segments_.size(); }
  SegmentView segment(SegmentId s) const;
  // a(S)[c]; zero outside the stored range.
  W count(SegmentId s, int c) const;
  // Stored counts start at depth countBase(s) below the segment.
  int countBase(SegmentId s) const { return segments_.at(s.value).base; }
  std::span<const W> counts(SegmentId s) const { return segments_.at(s.value).counts; }
  std::optional<SegmentId> findSegment(VertexId left, VertexId right) const;

  struct Traced {
    VertexId vertex;
    W offset;  // 1-based position inside the vertex's own mass
  };
  // The index-th (1-based) unit of mass at depth c below s.
  Traced trace(SegmentId s, int c, W index) const
    requires std::integral<W>;

  // Close segments of the last query, top-down. `best` is the smallest value of
  // (depth(w) + lateral gap - 2 * level) over the segment and its close ancestors, so a vertex u whose
  // deepest close segment is this one lies at distance depth(u) + best.
  struct CloseNode {
    SegmentId seg;
    int level;
    int best;
    std::optional<SegmentId> closeAncestor;
  };
  const std::vector<CloseNode>& collectClose(VertexId w);
  // Like trace, but returns nothing when the unit lies below another close segment of the last
  // query (it is accounted for there).
  std::optional<Traced> traceOwned(SegmentId s, int c, W index) const
    requires std::integral<W>;

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  struct Segment {
    std::uint32_t left;
    std::uint32_t right;
    std::uint32_t parent = kNone;
    std::uint32_t nextSameLeft = kNone;
    std::uint16_t level;
    std::uint8_t length;
    std::uint32_t stamp = 0;
    std::int32_t best = 0;
    std::int32_t base = 0;
    std::vector<W> counts;
    std::vector<std::uint32_t> children;
  };

  std::uint32_t findOrCreate(VertexId left, VertexId right);
  std::uint32_t parentOf(std::uint32_t s);
  void addCount(std::uint32_t s, int c, W k);

  Grid* grid_;
  std::vector<Segment> segments_;
  std::vector<std::uint32_t> leftHead_;
  int maxDepth_ = 0;
  W total_{};
  std::uint32_t stamp_ = 0;
  std::vector<CloseNode> close_;
};

extern template class DistanceTallyCounter<std::int64_t>;
extern template class DistanceTallyCounter<double>;

}  // namespace dhrg
