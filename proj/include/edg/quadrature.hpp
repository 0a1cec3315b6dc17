#pragma once

#include "edg/types.hpp"

#include <array>
#include <cmath>

namespace edg::quad {

/// 2-point Gauss rule on a segment, exact for cubics.
struct GaussPoint {
  double t;       // position along the segment in [0,1]
  double weight;  // fraction of the segment length
};

inline std::array<GaussPoint, 2> gauss2() {
  const double s = 0.5 / std::sqrt(3.0);
  return {{{0.5 - s, 0.5}, {0.5 + s, 0.5}}};
}

inline Point on_segment(const Point& a, const Point& b, double t) { return (1.0 - t) * a + t * b; }

/// Edge-midpoint rule on a triangle: exact for quadratics, weights |T|/3.
inline std::array<Point, 3> edge_midpoints(const Point& a, const Point& b, const Point& c) {
  return {0.5 * (b + c), 0.5 * (c + a), 0.5 * (a + b)};
}

}  // namespace edg::quad
