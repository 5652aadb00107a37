#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace dhrg {

double logBig(const BigInt& x) {
  if (x <= 0) fail(ErrorKind::InvalidArgument, "logBig of a non-positive number");
  const auto bits = boost::multiprecision::msb(x);
  if (bits < 1000) return std::log(x.convert_to<double>());
  // The two most significant limbs carry more precision than a double.
  const auto& be = x.backend();
  const auto n = be.size();
  const auto* limbs = be.limbs();
  constexpr int limbBits = sizeof(*limbs) * 8;
  const double top = std::ldexp(static_cast<double>(limbs[n - 1]), limbBits) + static_cast<double>(limbs[n - 2]);
  return std::log(top) + static_cast<double>(limbBits) * static_cast<double>(n - 2) * std::log(2.0);
}

Grid::Grid(GridKind kind) : spec_(&GridSpec::get(kind)), steps_(stepIsometries(*spec_)) {
  Record root;
  root.pred = 0;
  root.succ = 0;
  root.leftmostChild = 1;
  store_.push_back(root);
  const auto& rootChildren = spec_->type(0).childTypes;
  const auto n = static_cast<std::uint32_t>(rootChildren.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    Record r;
    r.depth = 1;
    r.type = static_cast<std::uint8_t>(rootChildren[i]);
    r.parentL = 0;
    r.parentR = 0;
    r.childIndex = static_cast<std::uint8_t>(i);
    r.pred = 1 + (i + n - 1) % n;
    r.succ = 1 + (i + 1) % n;
    store_.push_back(r);
  }
}

std::uint32_t Grid::create(const Record& r) {
  if (r.depth >= kMaxDepth) fail(ErrorKind::OutOfRange, "grid depth limit exceeded");
  if (store_.size() >= kNone) fail(ErrorKind::OutOfRange, "grid vertex store is full");
  store_.push_back(r);
  return static_cast<std::uint32_t>(store_.size() - 1);
}

void Grid::requireMutable(const char* what) const {
  if (frozen_)
    fail(ErrorKind::OutOfRange, std::string("grid is frozen at depth ") + std::to_string(frozenDepth_) +
                                    "; cannot materialize " + what);
}

void Grid::link(std::uint32_t left, std::uint32_t right) {
  store_[left].succ = right;
  store_[right].pred = left;
}

VertexId Grid::childLeftmost(VertexId v) {
  if (rec(v).leftmostChild != kNone) return VertexId{rec(v).leftmostChild};
  requireMutable("a child");
  const VertexId left = pred(v);
  if (rec(v).leftmostChild != kNone) return VertexId{rec(v).leftmostChild};
  Record r;
  r.depth = static_cast<std::uint16_t>(rec(v).depth + 1);
  r.type = static_cast<std::uint8_t>(spec_->type(rec(v).type).childTypes.front());
  r.parentR = v.value;
  r.parentL = left.value;
  r.childIndex = 0;
  const auto id = create(r);
  store_[v.value].leftmostChild = id;
  return VertexId{id};
}

VertexId Grid::succ(VertexId w) {
  if (rec(w).succ != kNone) return VertexId{rec(w).succ};
  requireMutable("a ring neighbour");
  const VertexId owner{rec(w).parentR};
  const int i = rec(w).childIndex;
  const auto& siblings = spec_->type(rec(owner).type).childTypes;
  if (i + 1 < static_cast<int>(siblings.size())) {
    Record r;
    r.depth = rec(w).depth;
    r.type = static_cast<std::uint8_t>(siblings[static_cast<size_t>(i + 1)]);
    r.parentL = owner.value;
    r.parentR = owner.value;
    r.childIndex = static_cast<std::uint8_t>(i + 1);
    const auto id = create(r);
    link(w.value, id);
    return VertexId{id};
  }
  const VertexId next = childLeftmost(succ(owner));
  if (rec(w).succ != kNone) return VertexId{rec(w).succ};
  link(w.value, next.value);
  return next;
}

VertexId Grid::pred(VertexId w) {
  if (rec(w).pred != kNone) return VertexId{rec(w).pred};
  requireMutable("a ring neighbour");
  if (rec(w).childIndex != 0) fail(ErrorKind::Internal, "non-leftmost child without a left neighbour");
  // w is the leftmost child of its owner, so its left neighbour is the last non-rightmost child of
  // the owner's left neighbour; walking there links the two.
  const VertexId owner{rec(w).parentR};
  const VertexId left = pred(owner);
  VertexId y = childLeftmost(left);
  const int n = static_cast<int>(spec_->type(rec(left).type).childTypes.size());
  for (int k = 1; k < n; ++k) y = succ(y);
  succ(y);
  if (rec(w).pred != y.value) fail(ErrorKind::Internal, "ring links are inconsistent");
  return y;
}

VertexId Grid::child(VertexId v, int i) {
  const int count = childCount(v);
  if (i < 0 || i >= count)
    fail(ErrorKind::OutOfRange, "child index " + std::to_string(i) + " out of range [0, " + std::to_string(count) + ")");
  if (v.value == 0) return VertexId{static_cast<std::uint32_t>(1 + i)};
  if (i == count - 1) return childLeftmost(succ(v));
  VertexId c = childLeftmost(v);
  for (int k = 0; k < i; ++k) c = succ(c);
  return c;
}

std::vector<VertexId> Grid::parents(VertexId v) const {
  if (v.value == 0) return {};
  const auto& r = rec(v);
  if (r.parentL == r.parentR) return {VertexId{r.parentR}};
  return {VertexId{r.parentL}, VertexId{r.parentR}};
}

std::vector<VertexId> Grid::children(VertexId v) {
  const int count = childCount(v);
  std::vector<VertexId> out;
  out.reserve(static_cast<size_t>(count));
  if (v.value == 0) {
    for (int i = 0; i < count; ++i) out.push_back(VertexId{static_cast<std::uint32_t>(1 + i)});
    return out;
  }
  VertexId c = childLeftmost(v);
  out.push_back(c);
  for (int i = 1; i < count; ++i) {
    c = succ(c);
    out.push_back(c);
  }
  return out;
}

std::vector<VertexId> Grid::neighbors(VertexId v) {
  std::vector<VertexId> out;
  if (v.value != 0) {
    out.push_back(pred(v));
    out.push_back(succ(v));
  }
  for (auto p : parents(v)) out.push_back(p);
  for (auto c : children(v)) out.push_back(c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VertexId Grid::followPath(std::span<const int> path) {
  VertexId v = root();
  for (int i : path) v = child(v, i);
  return v;
}

std::vector<int> Grid::pathOf(VertexId v) const {
  std::vector<int> path;
  while (v.value != 0) {
    path.push_back(rec(v).childIndex);
    v = VertexId{rec(v).parentR};
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void Grid::freeze(int depth) {
  if (frozen_) {
    if (depth <= frozenDepth_) return;
    fail(ErrorKind::InvalidArgument, "grid already frozen at a smaller depth");
  }
  if (depth < 0) fail(ErrorKind::InvalidArgument, "negative freeze depth");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> positions{{0, 0}};
  VertexId start = root();
  for (int k = 1; k <= depth; ++k) {
    start = childLeftmost(start);
    VertexId x = start;
    std::uint32_t pos = 0;
    do {
      positions.emplace_back(x.value, pos++);
      x = succ(x);
    } while (x != start);
    if (BigInt(pos) != ringSize(k)) fail(ErrorKind::Internal, "ring size mismatch while freezing");
  }
  packed_.resize(store_.size());
  for (auto [id, pos] : positions) {
    const auto& r = store_[id];
    packed_[id] = {id == 0 ? 0 : r.parentL, id == 0 ? 0 : r.parentR, pos, r.depth};
  }
  frozen_ = true;
  frozenDepth_ = depth;
}

void Grid::ringPositionMissing() const {
  fail(ErrorKind::OutOfRange, "ring positions exist only on a frozen grid");
}

void Grid::extendCounts(int k) const {
  if (k < 0) fail(ErrorKind::InvalidArgument, "negative depth");
  if (k > kMaxDepth) fail(ErrorKind::OutOfRange, "depth beyond the grid limit");
  const auto nt = static_cast<size_t>(spec_->typeCount());
  while (static_cast<int>(counts_.size()) <= k) {
    if (counts_.empty()) {
      counts_.emplace_back(nt, BigInt(1));
      weights_.emplace_back(nt, 1.0);
      continue;
    }
    const auto& prev = counts_.back();
    const auto& prevW = weights_.back();
    std::vector<BigInt> next(nt);
    std::vector<double> nextW(nt, 0.0);
    for (size_t t = 0; t < nt; ++t)
      for (int c : spec_->types[t].childTypes) {
        next[t] += prev[static_cast<size_t>(c)];
        nextW[t] += prevW[static_cast<size_t>(c)];
      }
    const double ring = nextW[0];
    for (double& w : nextW) w /= ring;
    counts_.push_back(std::move(next));
    weights_.push_back(std::move(nextW));
  }
}

BigInt Grid::descendantCount(int type, int i) const {
  if (type < 0 || type >= spec_->typeCount()) fail(ErrorKind::InvalidArgument, "unknown vertex type");
  extendCounts(i);
  return counts_[static_cast<size_t>(i)][static_cast<size_t>(type)];
}

double Grid::descendantWeight(int type, int i) const {
  extendCounts(i);
  return weights_[static_cast<size_t>(i)][static_cast<size_t>(type)];
}

BigInt Grid::ringSize(int k) const { return descendantCount(0, k); }

std::uint64_t Grid::ringSizeSaturatedSlow(int k) const {
  if (k < 0) return 0;
  extendCounts(k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  while (static_cast<int>(ringsSat_.size()) <= k) {
    const BigInt& r = counts_[ringsSat_.size()][0];
    ringsSat_.push_back(r > kMax ? kMax : r.convert_to<std::uint64_t>());
  }
  return ringsSat_[static_cast<size_t>(k)];
}

const HIsometry& Grid::frame(VertexId v) {
  static const HIsometry identity;
  if (v.value == 0) return identity;
  if (auto it = frames_.find(v.value); it != frames_.end()) return it->second;
  std::vector<VertexId> chain;
  VertexId x = v;
  const HIsometry* base = &identity;
  while (x.value != 0) {
    if (auto it = frames_.find(x.value); it != frames_.end()) {
      base = &it->second;
      break;
    }
    chain.push_back(x);
    x = VertexId{rec(x).parentR};
  }
  HIsometry current = *base;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const auto& r = rec(*it);
    const int ownerType = rec(VertexId{r.parentR}).type;
    current = compose(current, steps_.at({ownerType, r.childIndex}));
    frames_.emplace(it->value, current);
  }
  return frames_.at(v.value);
}

HPoint Grid::embed(VertexId v) { return frame(v).apply(kOrigin); }

VertexId Grid::nearestVertex(const HPoint& p, int maxDepth) {
  VertexId cur = root();
  double best = hypDistance(embed(cur), p);
  for (;;) {
    VertexId next = cur;
    for (VertexId nb : neighbors(cur)) {
      const double d = hypDistance(embed(nb), p);
      if (d < best - 1e-12) {
        best = d;
        next = nb;
      }
    }
    if (next == cur) return cur;
    if (depth(next) > maxDepth)
      fail(ErrorKind::OutOfRange, "nearest grid vertex lies deeper than " + std::to_string(maxDepth));
    cur = next;
  }
}

}  // namespace dhrg
