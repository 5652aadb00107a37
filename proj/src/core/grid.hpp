#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gridspec.hpp"
#include "hypgeom.hpp"

namespace dhrg {

using BigInt = boost::multiprecision::cpp_int;

struct VertexId {
  std::uint32_t value = 0;
  friend bool operator==(VertexId, VertexId) = default;
  friend auto operator<=>(VertexId, VertexId) = default;
};

inline constexpr int kMaxDepth = 1 << 15;

// Natural log of a positive big integer, without overflowing a double.
double logBig(const BigInt& x);

// Uniform triangular grid materialized lazily around the root.
//
// Each ring R_k is a cycle oriented counter-clockwise. A vertex stores its depth, type, both
// parents, both ring neighbours, its leftmost child and its index among the children of its right
// parent; links that have not been needed yet are left empty and resolved on demand. Handles are
// dense and stable, and the same sequence of queries always produces the same handles.
//
// Navigation mutates the store, so a Grid must be used from one thread at a time until freeze() is
// called; after that every query is a pure read and queries that would need a new vertex throw.
class Grid {
 public:
  explicit Grid(GridKind kind);

  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;
  Grid(Grid&&) = default;
  Grid& operator=(Grid&&) = default;

  const GridSpec& spec() const { return *spec_; }
  GridKind kind() const { return spec_->kind; }
  VertexId root() const { return VertexId{0}; }
  std::size_t materializedCount() const { return store_.size(); }

  int depth(VertexId v) const { return rec(v).depth; }
  int typeOf(VertexId v) const { return rec(v).type; }
  int degree(VertexId v) const { return spec_->type(rec(v).type).degree; }
  // Index of v among the children of its right parent; 0 for the root.
  int childIndex(VertexId v) const { return rec(v).childIndex; }
  int childCount(VertexId v) const { return spec_->childCount(rec(v).type); }

  // Empty for the root.
  std::optional<VertexId> parentLeft(VertexId v) const {
    if (v.value == 0) return std::nullopt;
    return VertexId{rec(v).parentL};
  }
  std::optional<VertexId> parentRight(VertexId v) const {
    if (v.value == 0) return std::nullopt;
    return VertexId{rec(v).parentR};
  }

  VertexId succ(VertexId v);
  VertexId pred(VertexId v);
  VertexId childLeftmost(VertexId v);
  // Children are numbered left to right; the last one is shared with succ(v).
  VertexId child(VertexId v, int i);

  std::vector<VertexId> parents(VertexId v) const;
  std::vector<VertexId> children(VertexId v);
  // All grid neighbours, without duplicates.
  std::vector<VertexId> neighbors(VertexId v);

  // Vertex reached by following child indices from the root.
  VertexId followPath(std::span<const int> path);
  // Child indices along the right-parent chain from the root (the canonical path).
  std::vector<int> pathOf(VertexId v) const;

  // Materializes the whole ball B_depth and forbids further growth.
  void freeze(int depth);
  bool frozen() const { return frozen_; }
  int frozenDepth() const { return frozenDepth_; }
  // Position of v on its ring (counter-clockwise from the first vertex); only on a frozen grid.
  std::uint32_t ringPosition(VertexId v) const { return packed(v).pos; }

  // Parents and ring position in one cache-friendly record; only on a frozen grid. The root is its
  // own parent.
  struct Packed {
    std::uint32_t parentL;
    std::uint32_t parentR;
    std::uint32_t pos;
    std::uint32_t depth;
  };
  const Packed& packed(VertexId v) const {
    if (v.value >= packed_.size()) ringPositionMissing();
    return packed_[v.value];
  }

  // Exact counts from the substitution matrix; no materialization.
  BigInt ringSize(int k) const;
  BigInt descendantCount(int type, int i) const;
  // descendantCount(type, i) / ringSize(i) as a double; relative sampling weights that never overflow.
  double descendantWeight(int type, int i) const;
  // Ring size as an integer that saturates at UINT64_MAX.
  std::uint64_t ringSizeSaturated(int k) const {
    if (k >= 0 && k < static_cast<int>(ringsSat_.size())) return ringsSat_[static_cast<size_t>(k)];
    return ringSizeSaturatedSlow(k);
  }
  double growthRate() const { return spec_->growthRate; }

  // Geometric realization j(v).
  HPoint embed(VertexId v);
  const HIsometry& frame(VertexId v);
  // Greedy descent from the root; the result is no farther from p than any of its neighbours.
  VertexId nearestVertex(const HPoint& p, int maxDepth);

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  struct Record {
    std::uint32_t parentL = kNone;
    std::uint32_t parentR = kNone;
    std::uint32_t pred = kNone;
    std::uint32_t succ = kNone;
    std::uint32_t leftmostChild = kNone;
    std::uint16_t depth = 0;
    std::uint8_t type = 0;
    std::uint8_t childIndex = 0;
  };

  const Record& rec(VertexId v) const { return store_[v.value]; }
  Record& rec(VertexId v) { return store_[v.value]; }
  std::uint32_t create(const Record& r);
  void requireMutable(const char* what) const;
  void link(std::uint32_t left, std::uint32_t right);
  void extendCounts(int k) const;
  std::uint64_t ringSizeSaturatedSlow(int k) const;
  [[noreturn]] void ringPositionMissing() const;

  const GridSpec* spec_;
  std::vector<Record> store_;
  bool frozen_ = false;
  int frozenDepth_ = -1;
  std::vector<Packed> packed_;

  // counts_[i][t] = |c^i(t)|, grown on demand.
  mutable std::vector<std::vector<BigInt>> counts_;
  mutable std::vector<std::vector<double>> weights_;
  mutable std::vector<std::uint64_t> ringsSat_;

  StepTable steps_;
  std::unordered_map<std::uint32_t, HIsometry> frames_;
};

}  // namespace dhrg

template <>
struct std::hash<dhrg::VertexId> {
  std::size_t operator()(dhrg::VertexId v) const noexcept { return std::hash<std::uint32_t>{}(v.value); }
};
