#include "gridspec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace dhrg {
namespace {

#include "grid_types.inc"

double dominantEigenvalue(const std::vector<VertexTypeInfo>& types) {
  // Power iteration on the type-count matrix of the non-root types.
  const size_t n = types.size() - 1;
  std::vector<double> v(n, 1.0), next(n);
  double lambda = 0;
  for (int iter = 0; iter < 10000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (size_t t = 0; t < n; ++t)
      for (int c : types[t + 1].childTypes) next[static_cast<size_t>(c - 1)] += v[t];
    double norm = 0;
    for (double x : next) norm += x;
    for (size_t t = 0; t < n; ++t) next[t] /= norm;
    // The sum of a normalized vector grows by lambda per step.
    double grown = 0;
    for (size_t t = 0; t < n; ++t) grown += next[t] * static_cast<double>(types[t + 1].childTypes.size());
    const double prev = lambda;
    lambda = grown;
    v.swap(next);
    if (iter > 10 && std::abs(lambda - prev) <= 1e-13 * lambda) break;
  }
  return lambda;
}

GridSpec makeSpec(GridKind kind) {
  GridSpec s;
  s.kind = kind;
  if (kind == GridKind::G7) {
    s.types = kG7Types;
    s.offsetBound = 2;
    s.expansionConstant = 1;
    s.maxGoodSegment = 2;
  } else {
    s.types = kG67Types;
    s.offsetBound = 3;
    s.expansionConstant = 2;
    s.maxGoodSegment = 3;
  }
  s.growthRate = dominantEigenvalue(s.types);
  return s;
}

}  // namespace

std::string_view gridKindName(GridKind kind) { return kind == GridKind::G7 ? "g7" : "g67"; }

GridKind parseGridKind(std::string_view name) {
  if (name == "g7" || name == "G7") return GridKind::G7;
  if (name == "g67" || name == "G67") return GridKind::G67;
  fail(ErrorKind::InvalidArgument, "unknown grid kind '" + std::string(name) + "' (expected g7 or g67)");
}

const GridSpec& GridSpec::get(GridKind kind) {
  static const GridSpec g7 = makeSpec(GridKind::G7);
  static const GridSpec g67 = makeSpec(GridKind::G67);
  return kind == GridKind::G7 ? g7 : g67;
}

int GridSpec::childCount(int t) const {
  const auto& info = type(t);
  return t == 0 ? static_cast<int>(info.childTypes.size()) : static_cast<int>(info.childTypes.size()) + 1;
}

double GridSpec::edgeLength(int degreeA, int degreeB) const {
  // Every face is a triangle whose angle at a vertex of degree k is 2*pi/k.
  int third = 7;
  if (kind == GridKind::G67) third = (degreeA == 6 && degreeB == 6) ? 7 : 6;
  const double a = 2 * std::numbers::pi / degreeA;
  const double b = 2 * std::numbers::pi / degreeB;
  const double c = 2 * std::numbers::pi / third;
  return std::acosh((std::cos(c) + std::cos(a) * std::cos(b)) / (std::sin(a) * std::sin(b)));
}

std::vector<double> GridSpec::distinctEdgeLengths() const {
  std::vector<int> degrees;
  for (const auto& t : types) degrees.push_back(t.degree);
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  std::vector<double> out;
  for (size_t i = 0; i < degrees.size(); ++i)
    for (size_t j = i; j < degrees.size(); ++j) {
      if (kind == GridKind::G67 && degrees[i] == 7 && degrees[j] == 7) continue;  // never adjacent
      out.push_back(edgeLength(degrees[i], degrees[j]));
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "grid " << gridKindName(kind) << "\n";
  os << "types " << types.size() << "\n";
  for (size_t t = 0; t < types.size(); ++t) {
    const auto& info = types[t];
    os << "type " << t << " " << info.name << " degree " << info.degree << " parents " << info.parents
       << " children";
    for (int c : info.childTypes) os << " " << c;
    os << "\n";
  }
  os << "root";
  for (int c : types[0].childTypes) os << " " << c;
  os << "\n";
  os << "growth " << growthRate << "\n";
  os << "offset_bound " << offsetBound << "\n";
  os << "expansion_constant " << expansionConstant << "\n";
  os << "max_good_segment " << maxGoodSegment << "\n";
  for (double l : distinctEdgeLengths()) os << "edge_length " << l << "\n";
  return os.str();
}

}  // namespace dhrg
