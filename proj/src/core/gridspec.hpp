#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dhrg {

enum class GridKind { G7, G67 };

std::string_view gridKindName(GridKind kind);
GridKind parseGridKind(std::string_view name);

struct VertexTypeInfo {
  std::string name;
  int degree;
  int parents;
  // Types of all children except the rightmost one (which is shared with the right sibling).
  std::vector<int> childTypes;
};

// Static description of a uniform triangular grid. Type 0 is always the root.
struct GridSpec {
  GridKind kind;
  std::vector<VertexTypeInfo> types;
  // Largest lateral offset that can occur on a shortest path between ancestor segments.
  int offsetBound;
  // Every segment of at least this many vertices has at least two more children than vertices.
  int expansionConstant;
  // Longest segment of the form P^d([v,v]).
  int maxGoodSegment;
  double growthRate;

  static const GridSpec& get(GridKind kind);

  int typeCount() const { return static_cast<int>(types.size()); }
  const VertexTypeInfo& type(int t) const { return types.at(static_cast<size_t>(t)); }
  // Number of children of a vertex of type t, including the shared rightmost one.
  int childCount(int t) const;
  // Hyperbolic length of an edge joining vertices of the two degrees.
  double edgeLength(int degreeA, int degreeB) const;
  std::vector<double> distinctEdgeLengths() const;

  // Plain-text dump: types, child rule, root sequence, growth rate and the bounds.
  std::string describe() const;
};

}  // namespace dhrg
