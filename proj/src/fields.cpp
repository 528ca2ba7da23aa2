#include "elastreg/fields.hpp"

#include <algorithm>

namespace elastreg {

ForceField::ForceField(int num_vertices, std::vector<int> support_vertices)
    : values(VecX::Zero(3 * num_vertices)), support(std::move(support_vertices)) {
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  if (!support.empty() && (support.front() < 0 || support.back() >= num_vertices)) {
    throw ConfigError("force field support vertex out of range");
  }
}

VecX ForceField::to_control() const {
  VecX x(3 * support.size());
  for (size_t i = 0; i < support.size(); ++i) {
    x.segment<3>(3 * i) = values.segment<3>(3 * support[i]);
  }
  return x;
}

void ForceField::set_from_control(const VecX& x) {
  if (x.size() != static_cast<Eigen::Index>(3 * support.size())) {
    throw ConsistencyError("control vector size does not match support");
  }
  values.setZero();
  for (size_t i = 0; i < support.size(); ++i) {
    values.segment<3>(3 * support[i]) = x.segment<3>(3 * i);
  }
}

Vec3 ForceField::resultant(std::span<const int> region) const {
  Vec3 sum = Vec3::Zero();
  for (int v : region) {
    if (!std::binary_search(support.begin(), support.end(), v)) {
      throw ConsistencyError("resultant region vertex outside force support");
    }
    sum += at(v);
  }
  return sum;
}

void ForceField::validate() const {
  for (int v = 0; v < num_vertices(); ++v) {
    if (at(v).isZero(0.0)) continue;
    if (!std::binary_search(support.begin(), support.end(), v)) {
      throw ConsistencyError("nonzero force outside support mask");
    }
  }
}

ForceField traction_nodal_forces(const TetMesh& mesh, std::span<const int> tris,
                                 const Vec3& traction) {
  std::vector<int> verts = triangle_vertices(mesh, tris);
  ForceField field(mesh.num_vertices(), std::move(verts));
  for (int t : tris) {
    const Vec3 contribution = traction * (mesh.tri_area(t) / 3.0);
    for (int v : mesh.boundary_tris()[t]) {
      field.values.segment<3>(3 * v) += contribution;
    }
  }
  return field;
}

}  // namespace elastreg
