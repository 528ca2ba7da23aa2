#pragma once

#include "elastreg/closest_point.hpp"
#include "elastreg/point_cloud.hpp"
#include "elastreg/tet_mesh.hpp"

#include <span>
#include <vector>

namespace elastreg {

/// Closest-point record of one cloud point on the deformed boundary.
struct Projection {
  int triangle;      // boundary triangle id (global)
  Vec3 barycentric;  // nonnegative weights summing to 1
  Vec3 position;     // barycentric combination of the deformed triangle
};

/// Closest-point queries against a snapshot of the deformed boundary,
/// restricted to a triangle subset (typically the matching surface).
/// Accelerated by an axis-aligned bounding-box tree; rebuild whenever the
/// displacement changes. Read-only during queries. Ties between triangles at
/// exactly equal distance resolve to the lowest triangle id.
class SurfaceProjector {
 public:
  SurfaceProjector(const TetMesh& mesh, const VecX& u, std::span<const int> tris);

  Projection project(const Vec3& y) const;
  std::vector<Projection> project_all(std::span<const Vec3> points,
                                      Parallel par = kDefaultParallel) const;

  /// Serial reference: exhaustive scan over the triangle subset.
  static Projection project_bruteforce(const TetMesh& mesh, const VecX& u,
                                       std::span<const int> tris, const Vec3& y);

 private:
  struct Node {
    Vec3 lo, hi;
    int left = -1, right = -1;  // children, or -1 for leaves
    int begin = 0, end = 0;     // leaf triangle range
  };
  struct Tri {
    Vec3 a, b, c;
    int id;  // global boundary triangle id
  };

  int build(int begin, int end);
  void query(int node, const Vec3& y, Projection& best, double& best_d2) const;
  double box_dist2(const Node& n, const Vec3& y) const;

  std::vector<Tri> tris_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Single-point closest-point operator (serial reference path).
Projection project_point(const TetMesh& mesh, const VecX& u, std::span<const int> matching_tris,
                         const Vec3& y);

struct FunctionalResult {
  double value;  // mean half squared distance (m^2)
  std::vector<Projection> projections;
};

/// J(u) = 1/(2m) sum |p_u(y_j) - y_j|^2 over the matching surface, plus the
/// projection list for reuse by the gradient.
FunctionalResult functional(const TetMesh& mesh, const VecX& u, const PointCloud& cloud,
                            std::span<const int> matching_tris,
                            Parallel par = kDefaultParallel);

/// Nodal gradient of J at fixed projections: each (r_j - y_j)/m spreads onto
/// the projection triangle's vertices with barycentric weights. Throws
/// ConsistencyError if a projection is stale with respect to (mesh, u).
VecX functional_gradient(const TetMesh& mesh, const VecX& u, const PointCloud& cloud,
                         std::span<const Projection> projections);

}  // namespace elastreg
