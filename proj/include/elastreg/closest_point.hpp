#pragma once

#include "elastreg/types.hpp"

namespace elastreg {

struct TriClosest {
  Vec3 point;
  Vec3 bary;  // weights of (a, b, c), nonnegative, summing to 1
  double dist2;
};

/// Exact closest point on triangle (a,b,c) to p via Voronoi-region
/// classification (vertex, edge and face regions handled separately), robust
/// at obtuse triangles.
TriClosest closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace elastreg
