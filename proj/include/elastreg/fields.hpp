#pragma once

#include "elastreg/tet_mesh.hpp"
#include "elastreg/types.hpp"

#include <span>
#include <vector>

namespace elastreg {

/// Nodal displacement over all mesh vertices, stored flat (3 dofs per vertex).
struct Displacement {
  VecX u;

  Displacement() = default;
  explicit Displacement(int num_vertices) : u(VecX::Zero(3 * num_vertices)) {}
  explicit Displacement(VecX values) : u(std::move(values)) {}

  int num_vertices() const { return static_cast<int>(u.size() / 3); }
  Vec3 at(int v) const { return u.segment<3>(3 * v); }
  void set(int v, const Vec3& value) { u.segment<3>(3 * v) = value; }
};

/// Nodal surface force vector supported on a set of control vertices.
/// `values` is full-size (3 dofs per vertex) and zero outside the support.
struct ForceField {
  VecX values;
  std::vector<int> support;  // sorted unique vertex ids

  ForceField() = default;
  ForceField(int num_vertices, std::vector<int> support_vertices);

  int num_vertices() const { return static_cast<int>(values.size() / 3); }
  Vec3 at(int v) const { return values.segment<3>(3 * v); }

  /// Control-space view: the support dofs packed in support order.
  VecX to_control() const;
  void set_from_control(const VecX& x);

  /// Componentwise sum of nodal forces over `region` (region must be a subset
  /// of the support).
  Vec3 resultant(std::span<const int> region) const;

  /// Throws ConsistencyError if any value outside the support is nonzero.
  void validate() const;
};

/// Consistent nodal forces of a uniform traction (Pa) over a triangle set:
/// each triangle spreads traction * area equally onto its three vertices.
/// The support is the set of vertices touched by `tris`.
ForceField traction_nodal_forces(const TetMesh& mesh, std::span<const int> tris,
                                 const Vec3& traction);

}  // namespace elastreg
