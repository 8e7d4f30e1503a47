#include "smash/curves.hpp"

#include <cmath>
#include <numbers>

namespace smash {

namespace {

constexpr double kPi = std::numbers::pi;

struct Polar {
  double rho, drho, ddrho, omega, rot;
};

// r(t) = rho(t) (cos ωt, sin ωt), then rotated by `rot`.
Vec2 rotate(const Vec2& v, double rot) {
  const double c = std::cos(rot), s = std::sin(rot);
  return {c * v(0) - s * v(1), s * v(0) + c * v(1)};
}

Vec2 polar_point(const Polar& p, double t) {
  const double th = p.omega * t;
  return rotate(p.rho * Vec2(std::cos(th), std::sin(th)), p.rot);
}

Vec2 polar_d1(const Polar& p, double t) {
  const double th = p.omega * t;
  const Vec2 e(std::cos(th), std::sin(th)), f(-std::sin(th), std::cos(th));
  return rotate(p.drho * e + p.rho * p.omega * f, p.rot);
}

Vec2 polar_d2(const Polar& p, double t) {
  const double th = p.omega * t;
  const Vec2 e(std::cos(th), std::sin(th)), f(-std::sin(th), std::cos(th));
  return rotate(p.ddrho * e + 2.0 * p.drho * p.omega * f - p.rho * p.omega * p.omega * e, p.rot);
}

Polar polar_of(CurveId id, double t) {
  switch (id) {
    case CurveId::sunflower: {
      const double a = 40.0 * kPi;
      return {1.3 + 1.25 * std::cos(a * t), -1.25 * a * std::sin(a * t), -1.25 * a * a * std::cos(a * t),
              2.0 * kPi, 0.0};
    }
    case CurveId::honeybee: {
      const double a = 4.0 * kPi;
      return {0.5 + std::sin(a * t), a * std::cos(a * t), -a * a * std::sin(a * t), 2.0 * kPi, -kPi / 6.0};
    }
    case CurveId::snail:
      return {0.2 + t, 1.0, 0.0, 4.0 * kPi, 0.0};
    default:
      return {1.0, 0.0, 0.0, 2.0 * kPi, 0.0};
  }
}

constexpr double kSnailShift = 1.2;
constexpr double kSnailScale = 2.4;

}  // namespace

bool CurveSpec::closed() const { return id != CurveId::snail && id != CurveId::interval; }

Vec2 CurveSpec::point(double t) const {
  switch (id) {
    case CurveId::ramhead: {
      const double c4 = std::pow(std::cos(4.0 * kPi * t), 4);
      return {2.0 * std::cos(2.0 * kPi * t), 1.0 + std::sin(2.0 * kPi * t) - 1.4 * c4};
    }
    case CurveId::interval:
      return {t, 0.0};
    case CurveId::snail:
      return (polar_point(polar_of(id, t), t) + Vec2::Constant(kSnailShift)) / kSnailScale;
    default:
      return polar_point(polar_of(id, t), t);
  }
}

Vec2 CurveSpec::d1(double t) const {
  switch (id) {
    case CurveId::ramhead: {
      const double c = std::cos(4.0 * kPi * t), s = std::sin(4.0 * kPi * t);
      return {-4.0 * kPi * std::sin(2.0 * kPi * t),
              2.0 * kPi * std::cos(2.0 * kPi * t) + 22.4 * kPi * c * c * c * s};
    }
    case CurveId::interval:
      return {1.0, 0.0};
    case CurveId::snail:
      return polar_d1(polar_of(id, t), t) / kSnailScale;
    default:
      return polar_d1(polar_of(id, t), t);
  }
}

Vec2 CurveSpec::d2(double t) const {
  switch (id) {
    case CurveId::ramhead: {
      const double c = std::cos(4.0 * kPi * t), s = std::sin(4.0 * kPi * t);
      return {-8.0 * kPi * kPi * std::cos(2.0 * kPi * t),
              -4.0 * kPi * kPi * std::sin(2.0 * kPi * t) +
                  89.6 * kPi * kPi * (c * c * c * c - 3.0 * c * c * s * s)};
    }
    case CurveId::interval:
      return {0.0, 0.0};
    case CurveId::snail:
      return polar_d2(polar_of(id, t), t) / kSnailScale;
    default:
      return polar_d2(polar_of(id, t), t);
  }
}

double CurveSpec::curvature(double t) const {
  const Vec2 a = d1(t), b = d2(t);
  return (a(0) * b(1) - a(1) * b(0)) / std::pow(a.norm(), 3);
}

std::string CurveSpec::name() const { return to_string(id); }

std::string to_string(CurveId id) {
  switch (id) {
    case CurveId::ramhead: return "ramhead";
    case CurveId::sunflower: return "sunflower";
    case CurveId::honeybee: return "honeybee";
    case CurveId::snail: return "snail";
    case CurveId::circle: return "circle";
    case CurveId::interval: return "interval";
  }
  return "unknown";
}

CurveId parse_curve(const std::string& name) {
  for (CurveId id : {CurveId::ramhead, CurveId::sunflower, CurveId::honeybee, CurveId::snail,
                     CurveId::circle, CurveId::interval})
    if (to_string(id) == name) return id;
  throw ValidationError("unknown curve id: " + name);
}

int winding_number(const std::vector<Vec2>& v, const Vec2& x) {
  double total = 0.0;
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 a = v[k] - x, b = v[(k + 1) % n] - x;
    total += std::atan2(a(0) * b(1) - a(1) * b(0), a.dot(b));
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

int winding_number(const CurveSpec& curve, const Vec2& x, int samples) {
  require(curve.closed(), "winding_number: curve is not closed");
  std::vector<Vec2> v(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) v[static_cast<std::size_t>(k)] = curve.point(double(k) / samples);
  return winding_number(v, x);
}

}  // namespace smash
