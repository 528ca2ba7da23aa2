#pragma once

#include "elastreg/types.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace elastreg {

/// Immutable tetrahedral volume mesh with derived outward-oriented boundary.
///
/// Construction validates: indices in range, strictly positive signed tet
/// volumes, and boundary faces appearing in exactly one tet. Instances are
/// safe for shared concurrent reads.
class TetMesh {
 public:
  TetMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 4>>& tets() const { return tets_; }

  /// Boundary triangles, outward-oriented, ordered by (owning tet, local face).
  const std::vector<std::array<int, 3>>& boundary_tris() const { return boundary_tris_; }
  /// Tet owning boundary triangle `tri`.
  int boundary_owner(int tri) const { return boundary_owner_[tri]; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_tets() const { return static_cast<int>(tets_.size()); }
  int num_boundary_tris() const { return static_cast<int>(boundary_tris_.size()); }

  double tet_volume(int t) const;
  double total_volume() const;

  /// Deformed position of vertex v; u may be empty (rest configuration).
  Vec3 deformed_vertex(int v, const VecX& u) const;

  Vec3 tri_centroid(int tri) const;
  /// Area-weighted outward normal (norm = 2*area).
  Vec3 tri_area_normal(int tri) const;
  double tri_area(int tri) const;

  /// Axis-aligned bounding box diagonal length of the rest configuration.
  double diameter() const;

  /// True if vertex v lies on some boundary triangle.
  bool on_boundary(int v) const { return on_boundary_[v]; }

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 4>> tets_;
  std::vector<std::array<int, 3>> boundary_tris_;
  std::vector<int> boundary_owner_;
  std::vector<char> on_boundary_;
};

/// Faces of `tets` appearing in exactly one tet, outward-oriented, ordered by
/// (owning tet id, local face id). Throws InvalidMeshError if a face occurs
/// more than twice. `owners`, when non-null, receives the owning tet ids.
std::vector<std::array<int, 3>> extract_boundary(const std::vector<Vec3>& vertices,
                                                 const std::vector<std::array<int, 4>>& tets,
                                                 std::vector<int>* owners = nullptr);

/// Structured box mesh: nx*ny*nz cells, each split into 6 tets (Kuhn split,
/// conforming across cells). Extents are the box side lengths in meters.
TetMesh generate_box_mesh(int nx, int ny, int nz, const Vec3& extents);

/// Ids of boundary triangles whose centroid satisfies `predicate`.
std::vector<int> select_region(const TetMesh& mesh,
                               const std::function<bool(const Vec3&)>& predicate);

/// Named surface regions: matching (compared against the point cloud), loaded
/// (where surface forces may apply) and fixed (zero-displacement vertices).
struct RegionLabels {
  std::vector<int> matching;        // boundary triangle ids
  std::vector<int> loaded;          // boundary triangle ids
  std::vector<int> fixed_vertices;  // vertex ids

  /// Throws ConfigError unless: triangle ids valid, fixed vertices on the
  /// boundary, and loaded-region vertices disjoint from fixed vertices.
  void validate(const TetMesh& mesh) const;
};

/// Sorted unique vertices of the given boundary triangles.
std::vector<int> triangle_vertices(const TetMesh& mesh, std::span<const int> tris);

}  // namespace elastreg
