#pragma once

#include <cmath>
#include <stdexcept>

namespace sdd {

/// Planar point in km; the depot sits at the origin.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Quadrant index around the depot. Points on an axis go to the nonnegative side.
///   0: x>=0,y>=0   1: x<0,y>=0   2: x<0,y<0   3: x>=0,y<0
inline int quadrant_of(Point p) {
  const bool east = p.x >= 0.0;
  const bool north = p.y >= 0.0;
  if (north) return east ? 0 : 1;
  return east ? 3 : 2;
}

inline constexpr double kPeriodMinutes = 15.0;

inline int period_of(double t_min, double period_min = kPeriodMinutes) {
  if (!(t_min >= 0.0)) throw std::invalid_argument("period_of: negative time");
  return static_cast<int>(std::floor(t_min / period_min));
}

}  // namespace sdd
