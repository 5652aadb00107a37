#include "griddist.hpp"

#include <algorithm>
#include <climits>
#include <string>

#include "error.hpp"

namespace dhrg {
namespace {

// Smallest ring distance between the arcs [a, a+lenA-1] and [0, lenB-1] on a ring of n vertices.
std::int64_t arcGap(std::int64_t a, std::int64_t lenA, std::int64_t lenB, std::uint64_t n) {
  auto linear = [&](std::int64_t s) -> std::int64_t {
    if (s > lenB - 1) return s - (lenB - 1);
    if (s + lenA - 1 < 0) return -(s + lenA - 1);
    return 0;
  };
  std::int64_t g = linear(a);
  if (n < (std::uint64_t{1} << 40)) {
    const auto m = static_cast<std::int64_t>(n);
    g = std::min({g, linear(a - m), linear(a + m)});
  }
  return g;
}

// Ring distance between two segments on the same ring if it is at most `bound`, else -1.
int segmentGapWalk(Grid& g, VertexId vL, VertexId vR, VertexId wL, VertexId wR, int bound) {
  for (VertexId x = vL;; x = g.succ(x)) {
    if (x == wL) return 0;
    if (x == vR) break;
  }
  for (VertexId y = wL;; y = g.succ(y)) {
    if (y == vL) return 0;
    if (y == wR) break;
  }
  int best = -1;
  VertexId x = vR;
  for (int s = 1; s <= bound; ++s) {
    x = g.succ(x);
    if (x == wL) {
      best = s;
      break;
    }
  }
  VertexId y = wR;
  for (int s = 1; s <= bound; ++s) {
    if (best >= 0 && s >= best) break;
    y = g.succ(y);
    if (y == vL) {
      best = s;
      break;
    }
  }
  return best;
}

// Distance on the frozen part of a grid, from ring positions. At each level W starts o steps after
// the start of V; if it does not start inside V and does not wrap around onto it, the gap is the
// shorter of the two ways around the ring.
int distanceFrozen(const Grid& g, VertexId v, VertexId w) {
  const int bound = g.spec().offsetBound;
  const Grid::Packed* pv = &g.packed(v);
  const Grid::Packed* pw = &g.packed(w);
  const Grid::Packed* vL = pv;
  const Grid::Packed* vR = pv;
  const Grid::Packed* wL = pw;
  const Grid::Packed* wR = pw;
  int level = static_cast<int>(std::max(pv->depth, pw->depth));
  int a = 0, c = 0;
  for (; level > static_cast<int>(pw->depth); --level, ++a) {
    vL = &g.packed(VertexId{vL->parentL});
    vR = &g.packed(VertexId{vR->parentR});
  }
  for (; level > static_cast<int>(pv->depth); --level, ++c) {
    wL = &g.packed(VertexId{wL->parentL});
    wR = &g.packed(VertexId{wR->parentR});
  }
  int best = INT_MAX;
  for (;; --level, ++a, ++c) {
    if (a + c >= best) break;
    const auto m = static_cast<std::int64_t>(g.ringSizeSaturated(level));
    auto forward = [m](std::int64_t from, std::int64_t to) { return to >= from ? to - from : to - from + m; };
    const std::int64_t lastV = forward(vL->pos, vR->pos);
    const std::int64_t o = forward(vL->pos, wL->pos);
    std::int64_t gap = 0;
    if (o > lastV) {
      const std::int64_t lastW = o + forward(wL->pos, wR->pos);
      if (lastW < m) gap = std::min(o - lastV, m - lastW);
    }
    if (gap <= bound) best = std::min(best, a + c + static_cast<int>(gap));
    if (level == 0) break;
    vL = &g.packed(VertexId{vL->parentL});
    vR = &g.packed(VertexId{vR->parentR});
    wL = &g.packed(VertexId{wL->parentL});
    wR = &g.packed(VertexId{wR->parentR});
  }
  return best;
}

}  // namespace

int gridDistance(Grid& grid, VertexId v, VertexId w) {
  if (v == w) return 0;
  if (grid.frozen() && grid.depth(v) <= grid.frozenDepth() && grid.depth(w) <= grid.frozenDepth())
    return distanceFrozen(grid, v, w);
  const int bound = grid.spec().offsetBound;
  int dv = grid.depth(v);
  int dw = grid.depth(w);
  VertexId vL = v, vR = v, wL = w, wR = w;
  int a = 0, c = 0;
  while (dv > dw) {
    vL = *grid.parentLeft(vL);
    vR = *grid.parentRight(vR);
    ++a;
    --dv;
  }
  while (dw > dv) {
    wL = *grid.parentLeft(wL);
    wR = *grid.parentRight(wR);
    ++c;
    --dw;
  }
  int best = INT_MAX;
  for (;;) {
    if (a + c >= best) break;
    const int gap = segmentGapWalk(grid, vL, vR, wL, wR, bound);
    if (gap >= 0) best = std::min(best, a + c + gap);
    if (dv == 0) break;
    vL = *grid.parentLeft(vL);
    vR = *grid.parentRight(vR);
    wL = *grid.parentLeft(wL);
    wR = *grid.parentRight(wR);
    ++a;
    ++c;
    --dv;
  }
  return best;
}

template <class W>
DistanceTallyCounter<W>::DistanceTallyCounter(Grid& grid) : grid_(&grid) {}

template <class W>
std::uint32_t DistanceTallyCounter<W>::findOrCreate(VertexId left, VertexId right) {
  if (left.value < leftHead_.size()) {
    for (auto s = leftHead_[left.value]; s != kNone; s = segments_[s].nextSameLeft)
      if (segments_[s].right == right.value) return s;
  }
  int length = 1;
  for (VertexId x = left; x != right; x = grid_->succ(x)) {
    ++length;
    if (length > grid_->spec().maxGoodSegment)
      fail(ErrorKind::Internal, "ancestor segment longer than the grid's bound");
  }
  if (leftHead_.size() <= left.value) leftHead_.resize(std::max<size_t>(left.value + 1, grid_->materializedCount()), kNone);
  Segment seg;
  seg.left = left.value;
  seg.right = right.value;
  seg.level = static_cast<std::uint16_t>(grid_->depth(left));
  seg.length = static_cast<std::uint8_t>(length);
  seg.nextSameLeft = leftHead_[left.value];
  segments_.push_back(std::move(seg));
  const auto id = static_cast<std::uint32_t>(segments_.size() - 1);
  leftHead_[left.value] = id;
  return id;
}

template <class W>
std::uint32_t DistanceTallyCounter<W>::parentOf(std::uint32_t s) {
  if (segments_[s].parent != kNone) return segments_[s].parent;
  const VertexId pl = *grid_->parentLeft(VertexId{segments_[s].left});
  const VertexId pr = *grid_->parentRight(VertexId{segments_[s].right});
  const auto p = findOrCreate(pl, pr);
  segments_[s].parent = p;
  segments_[p].children.push_back(s);
  return p;
}

template <class W>
void DistanceTallyCounter<W>::addCount(std::uint32_t s, int c, W k) {
  auto& seg = segments_[s];
  if (seg.counts.empty()) {
    seg.base = c;
    seg.counts.push_back(W{});
  } else if (c < seg.base) {
    seg.counts.insert(seg.counts.begin(), static_cast<size_t>(seg.base - c), W{});
    seg.base = c;
  } else if (c >= seg.base + static_cast<int>(seg.counts.size())) {
    seg.counts.resize(static_cast<size_t>(c - seg.base + 1), W{});
  }
  W& slot = seg.counts[static_cast<size_t>(c - seg.base)];
  if constexpr (std::integral<W>) {
    if (__builtin_add_overflow(slot, k, &slot)) fail(ErrorKind::Numeric, "tally counter overflow");
  } else {
    slot += k;
  }
}

template <class W>
void DistanceTallyCounter<W>::add(VertexId v, W k) {
  std::uint32_t s = findOrCreate(v, v);
  for (int c = 0;; ++c) {
    addCount(s, c, k);
    if (segments_[s].level == 0) break;
    s = parentOf(s);
  }
  maxDepth_ = std::max(maxDepth_, grid_->depth(v));
  if constexpr (std::integral<W>) {
    if (__builtin_add_overflow(total_, k, &total_)) fail(ErrorKind::Numeric, "tally counter overflow");
  } else {
    total_ += k;
  }
}

template <class W>
const std::vector<typename DistanceTallyCounter<W>::CloseNode>& DistanceTallyCounter<W>::collectClose(VertexId w) {
  ++stamp_;
  close_.clear();
  const int bound = grid_->spec().offsetBound;
  const int back = bound + grid_->spec().maxGoodSegment - 1;
  const int dw = grid_->depth(w);

  std::vector<VertexId> lefts(static_cast<size_t>(dw + 1)), rights(static_cast<size_t>(dw + 1));
  lefts[static_cast<size_t>(dw)] = w;
  rights[static_cast<size_t>(dw)] = w;
  for (int l = dw; l > 0; --l) {
    lefts[static_cast<size_t>(l - 1)] = *grid_->parentLeft(lefts[static_cast<size_t>(l)]);
    rights[static_cast<size_t>(l - 1)] = *grid_->parentRight(rights[static_cast<size_t>(l)]);
  }

  std::vector<std::uint32_t> found;
  for (int level = 0; level <= dw; ++level) {
    const VertexId wl = lefts[static_cast<size_t>(level)];
    const VertexId wr = rights[static_cast<size_t>(level)];
    int lenW = 1;
    for (VertexId x = wl; x != wr; x = grid_->succ(x)) ++lenW;
    const std::uint64_t ring = grid_->ringSizeSaturated(level);

    VertexId x = wl;
    for (int i = 0; i < back; ++i) x = grid_->pred(x);
    const int window = back + lenW + bound;
    found.clear();
    for (int i = 0; i < window; ++i, x = grid_->succ(x)) {
      if (x.value >= leftHead_.size()) continue;
      const std::int64_t offset = i - back;
      for (auto s = leftHead_[x.value]; s != kNone; s = segments_[s].nextSameLeft) {
        auto& seg = segments_[s];
        const auto gap = arcGap(offset, seg.length, lenW, ring);
        if (gap > bound) continue;
        const int key = dw + static_cast<int>(gap) - 2 * level;
        if (seg.stamp == stamp_) {
          seg.best = std::min<std::int32_t>(seg.best, key);
        } else {
          seg.stamp = stamp_;
          seg.best = key;
          found.push_back(s);
        }
      }
    }
    for (auto s : found) {
      auto p = segments_[s].parent;
      while (p != kNone && segments_[p].stamp != stamp_) p = segments_[p].parent;
      std::optional<SegmentId> anc;
      if (p != kNone) {
        anc = SegmentId{p};
        segments_[s].best = std::min(segments_[s].best, segments_[p].best);
      }
      close_.push_back({SegmentId{s}, level, segments_[s].best, anc});
    }
  }
  return close_;
}

template <class W>
std::vector<W> DistanceTallyCounter<W>::tally(VertexId w) {
  const int dw = grid_->depth(w);
  std::vector<W> out(static_cast<size_t>(dw + maxDepth_ + 1), W{});
  for (const auto& node : collectClose(w)) {
    const auto& seg = segments_[node.seg.value];
    const int ancBest = node.closeAncestor ? segments_[node.closeAncestor->value].best : 0;
    for (size_t i = 0; i < seg.counts.size(); ++i) {
      const W v = seg.counts[i];
      if (v == W{}) continue;
      const int du = node.level + seg.base + static_cast<int>(i);
      out[static_cast<size_t>(du + node.best)] += v;
      if (node.closeAncestor) out[static_cast<size_t>(du + ancBest)] -= v;
    }
  }
  return out;
}

template <class W>
typename DistanceTallyCounter<W>::SegmentView DistanceTallyCounter<W>::segment(SegmentId s) const {
  const auto& seg = segments_.at(s.value);
  SegmentView view{VertexId{seg.left}, VertexId{seg.right}, seg.level, seg.length, std::nullopt, seg.children};
  if (seg.parent != kNone) view.parent = SegmentId{seg.parent};
  return view;
}

template <class W>
W DistanceTallyCounter<W>::count(SegmentId s, int c) const {
  const auto& seg = segments_.at(s.value);
  const int i = c - seg.base;
  if (i < 0 || i >= static_cast<int>(seg.counts.size())) return W{};
  return seg.counts[static_cast<size_t>(i)];
}

template <class W>
std::optional<SegmentId> DistanceTallyCounter<W>::findSegment(VertexId left, VertexId right) const {
  if (left.value >= leftHead_.size()) return std::nullopt;
  for (auto s = leftHead_[left.value]; s != kNone; s = segments_[s].nextSameLeft)
    if (segments_[s].right == right.value) return SegmentId{s};
  return std::nullopt;
}

template <class W>
typename DistanceTallyCounter<W>::Traced DistanceTallyCounter<W>::trace(SegmentId s, int c, W index) const
  requires std::integral<W>
{
  if (index < 1 || index > count(s, c))
    fail(ErrorKind::OutOfRange, "trace index " + std::to_string(index) + " outside [1, " +
                                    std::to_string(count(s, c)) + "]");
  std::uint32_t cur = s.value;
  while (c > 0) {
    bool moved = false;
    for (auto ch : segments_[cur].children) {
      const W n = count(SegmentId{ch}, c - 1);
      if (index <= n) {
        cur = ch;
        moved = true;
        break;
      }
      index -= n;
    }
    if (!moved) fail(ErrorKind::Internal, "segment counts do not nest");
    --c;
  }
  return {VertexId{segments_[cur].left}, index};
}

template <class W>
std::optional<typename DistanceTallyCounter<W>::Traced> DistanceTallyCounter<W>::traceOwned(SegmentId s, int c,
                                                                                             W index) const
  requires std::integral<W>
{
  if (index < 1 || index > count(s, c)) fail(ErrorKind::OutOfRange, "trace index out of range");
  std::uint32_t cur = s.value;
  while (c > 0) {
    bool moved = false;
    for (auto ch : segments_[cur].children) {
      const W n = count(SegmentId{ch}, c - 1);
      if (index <= n) {
        if (segments_[ch].stamp == stamp_) return std::nullopt;
        cur = ch;
        moved = true;
        break;
      }
      index -= n;
    }
    if (!moved) fail(ErrorKind::Internal, "segment counts do not nest");
    --c;
  }
  return Traced{VertexId{segments_[cur].left}, index};
}

template class DistanceTallyCounter<std::int64_t>;
template class DistanceTallyCounter<double>;

}  // namespace dhrg
