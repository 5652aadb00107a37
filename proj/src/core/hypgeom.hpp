#pragma once

#include <array>
#include <map>
#include <utility>

#include "gridspec.hpp"

namespace dhrg {

// Point of the hyperbolic plane in the hyperboloid model: x^2 + y^2 - z^2 = -1, z >= 1.
struct HPoint {
  double x = 0;
  double y = 0;
  double z = 1;
};

struct PolarCoord {
  double r = 0;
  double phi = 0;  // [0, 2*pi)
};

inline constexpr HPoint kOrigin{0, 0, 1};

double minkowskiDot(const HPoint& a, const HPoint& b);

// Orientation-preserving isometry, stored as a 3x3 Lorentz matrix (row major).
class HIsometry {
 public:
  HIsometry();  // identity

  static HIsometry fromMatrix(const std::array<double, 9>& m);
  static HIsometry rotation(double angle);
  // Translation of the given length along the x axis.
  static HIsometry translation(double length);

  HPoint apply(const HPoint& p) const;
  HIsometry inverse() const;
  double at(int row, int col) const { return m_[static_cast<size_t>(row * 3 + col)]; }
  const std::array<double, 9>& matrix() const { return m_; }

  // Largest |m^T J m - J| entry.
  double lorentzDefect() const;
  double determinant() const;

 private:
  friend HIsometry compose(const HIsometry& g, const HIsometry& h);
  void renormalize();

  std::array<double, 9> m_;
};

// g after h. The product is re-orthonormalized against the Minkowski form while its entries are
// small enough for that to be meaningful.
HIsometry compose(const HIsometry& g, const HIsometry& h);

// Hyperbolic distance; uses the chordal form for nearby points so small distances keep their
// relative precision.
double hypDistance(const HPoint& a, const HPoint& b);

HPoint polarToPoint(const PolarCoord& c);
// The angle of the origin is 0.
PolarCoord pointToPolar(const HPoint& p);
double wrapAngle(double phi);

// Poincare disk coordinates, for output only.
std::pair<double, double> toPoincare(const HPoint& p);

// Frame change from a parent vertex to its child, keyed by (parent type, index of the child
// among the parent's non-rightmost children). In every frame the vertex sits at the origin and the
// positive x axis points to its right parent (for the root, to its first child).
using StepTable = std::map<std::pair<int, int>, HIsometry>;
StepTable stepIsometries(const GridSpec& spec);

}  // namespace dhrg
