#include "hypgeom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dhrg {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
// The Minkowski products used by Gram-Schmidt lose about entry^2 * eps to cancellation, so larger
// matrices are left alone; plain products only accumulate relative error.
constexpr double kRenormalizeLimit = 1e2;

struct Vec3 {
  double x, y, z;
};

double mdot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }
Vec3 axpy(double s, const Vec3& a, const Vec3& b) { return {b.x + s * a.x, b.y + s * a.y, b.z + s * a.z}; }
Vec3 scale(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }

}  // namespace

double minkowskiDot(const HPoint& a, const HPoint& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }

HIsometry::HIsometry() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

HIsometry HIsometry::fromMatrix(const std::array<double, 9>& m) {
  HIsometry g;
  g.m_ = m;
  return g;
}

HIsometry HIsometry::rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return fromMatrix({c, -s, 0, s, c, 0, 0, 0, 1});
}

HIsometry HIsometry::translation(double length) {
  const double c = std::cosh(length), s = std::sinh(length);
  return fromMatrix({c, 0, s, 0, 1, 0, s, 0, c});
}

HPoint HIsometry::apply(const HPoint& p) const {
  return {m_[0] * p.x + m_[1] * p.y + m_[2] * p.z, m_[3] * p.x + m_[4] * p.y + m_[5] * p.z,
          m_[6] * p.x + m_[7] * p.y + m_[8] * p.z};
}

HIsometry HIsometry::inverse() const {
  // J m^T J with J = diag(1, 1, -1).
  const auto& m = m_;
  return fromMatrix({m[0], m[3], -m[6], m[1], m[4], -m[7], -m[2], -m[5], m[8]});
}

double HIsometry::lorentzDefect() const {
  static constexpr double j[3] = {1, 1, -1};
  double worst = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += at(k, a) * j[k] * at(k, b);
      const double expect = a == b ? j[a] : 0.0;
      worst = std::max(worst, std::abs(s - expect));
    }
  return worst;
}

double HIsometry::determinant() const {
  const auto& m = m_;
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

void HIsometry::renormalize() {
  double biggest = 0;
  for (double v : m_) biggest = std::max(biggest, std::abs(v));
  if (biggest > kRenormalizeLimit) return;

  Vec3 c0{m_[0], m_[3], m_[6]};
  Vec3 c1{m_[1], m_[4], m_[7]};
  Vec3 c2{m_[2], m_[5], m_[8]};
  // Timelike column first, then project the spacelike ones against it.
  c2 = scale(1.0 / std::sqrt(-mdot(c2, c2)), c2);
  c0 = axpy(mdot(c0, c2), c2, c0);
  c0 = scale(1.0 / std::sqrt(mdot(c0, c0)), c0);
  c1 = axpy(mdot(c1, c2), c2, c1);
  c1 = axpy(-mdot(c1, c0), c0, c1);
  c1 = scale(1.0 / std::sqrt(mdot(c1, c1)), c1);
  m_ = {c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z};
}

HIsometry compose(const HIsometry& g, const HIsometry& h) {
  std::array<double, 9> out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += g.at(r, k) * h.at(k, c);
      out[static_cast<size_t>(r * 3 + c)] = s;
    }
  HIsometry result = HIsometry::fromMatrix(out);
  result.renormalize();
  return result;
}

double hypDistance(const HPoint& a, const HPoint& b) {
  const double coshd = std::max(1.0, -minkowskiDot(a, b));
  if (coshd < 2.0) {
    // |a-b|^2 in the Minkowski form equals 4 sinh^2(d/2).
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    const double q = std::max(0.0, dx * dx + dy * dy - dz * dz);
    return 2 * std::asinh(std::sqrt(q) / 2);
  }
  return std::acosh(coshd);
}

double wrapAngle(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0) w += kTwoPi;
  if (w >= kTwoPi) w = 0;
  return w;
}

HPoint polarToPoint(const PolarCoord& c) {
  const double s = std::sinh(c.r);
  return {s * std::cos(c.phi), s * std::sin(c.phi), std::cosh(c.r)};
}

PolarCoord pointToPolar(const HPoint& p) {
  const double rho = std::hypot(p.x, p.y);
  // asinh of the spatial radius is exact near the origin, unlike acosh(z).
  const double r = std::asinh(rho);
  const double phi = rho == 0 ? 0.0 : wrapAngle(std::atan2(p.y, p.x));
  return {r, phi};
}

std::pair<double, double> toPoincare(const HPoint& p) { return {p.x / (1 + p.z), p.y / (1 + p.z)}; }

StepTable stepIsometries(const GridSpec& spec) {
  StepTable table;
  const HIsometry turnBack = HIsometry::rotation(std::numbers::pi);
  for (int t = 0; t < spec.typeCount(); ++t) {
    const auto& info = spec.type(t);
    const double spacing = kTwoPi / info.degree;
    // Counter-clockwise from the right parent: parents, left sibling, children, right sibling.
    const int firstChildSlot = t == 0 ? 0 : info.parents + 1;
    for (size_t i = 0; i < info.childTypes.size(); ++i) {
      const auto& child = spec.type(info.childTypes[i]);
      const double angle = spacing * static_cast<double>(firstChildSlot + static_cast<int>(i));
      const double len = spec.edgeLength(info.degree, child.degree);
      HIsometry step = compose(HIsometry::rotation(angle), compose(HIsometry::translation(len), turnBack));
      table.emplace(std::make_pair(t, static_cast<int>(i)), step);
    }
  }
  return table;
}

}  // namespace dhrg
