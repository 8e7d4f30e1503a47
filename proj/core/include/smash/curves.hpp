#ifndef SMASH_CURVES_HPP
#define SMASH_CURVES_HPP

#include <string>
#include <vector>

#include "smash/config.hpp"

namespace smash {

using Vec2 = Eigen::Vector2d;

enum class CurveId { ramhead, sunflower, honeybee, snail, circle, interval };

/// Parametrized planar curve on t ∈ [0, 1] with analytic derivatives.
struct CurveSpec {
  CurveId id = CurveId::circle;

  bool closed() const;
  Vec2 point(double t) const;
  Vec2 d1(double t) const;
  Vec2 d2(double t) const;
  /// Signed curvature (r1'r2'' − r2'r1'')/|r'|^3.
  double curvature(double t) const;
  std::string name() const;
};

CurveId parse_curve(const std::string& name);
std::string to_string(CurveId id);

inline Vec2 curve_point(const CurveSpec& c, double t) { return c.point(t); }

/// Winding number of the closed polygon through `vertices` around x.
int winding_number(const std::vector<Vec2>& vertices, const Vec2& x);
/// Winding number of a closed curve sampled at `samples` points.
int winding_number(const CurveSpec& curve, const Vec2& x, int samples = 8192);

}  // namespace smash

#endif
