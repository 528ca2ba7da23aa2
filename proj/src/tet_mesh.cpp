#include "elastreg/tet_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

namespace elastreg {

namespace {

// Local faces of tet (v0,v1,v2,v3), ordered so that for a positively oriented
// tet each face normal (b-a)x(c-a) points away from the opposite vertex.
constexpr int kLocalFaces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

}  // namespace

std::vector<std::array<int, 3>> extract_boundary(const std::vector<Vec3>& vertices,
                                                 const std::vector<std::array<int, 4>>& tets,
                                                 std::vector<int>* owners) {
  (void)vertices;
  // Census of faces keyed by their sorted vertex triple.
  std::map<std::array<int, 3>, int> count;
  for (const auto& tet : tets) {
    for (const auto& f : kLocalFaces) {
      std::array<int, 3> key = {tet[f[0]], tet[f[1]], tet[f[2]]};
      std::sort(key.begin(), key.end());
      int c = ++count[key];
      if (c > 2) {
        throw InvalidMeshError("face shared by more than two tets");
      }
    }
  }

  std::vector<std::array<int, 3>> boundary;
  if (owners) owners->clear();
  for (int t = 0; t < static_cast<int>(tets.size()); ++t) {
    for (const auto& f : kLocalFaces) {
      std::array<int, 3> tri = {tets[t][f[0]], tets[t][f[1]], tets[t][f[2]]};
      std::array<int, 3> key = tri;
      std::sort(key.begin(), key.end());
      if (count.at(key) == 1) {
        boundary.push_back(tri);
        if (owners) owners->push_back(t);
      }
    }
  }
  return boundary;
}

TetMesh::TetMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets)
    : vertices_(std::move(vertices)), tets_(std::move(tets)) {
  const int n = num_vertices();
  if (n == 0 || tets_.empty()) {
    throw InvalidMeshError("mesh needs at least one vertex and one tet");
  }
  for (const auto& v : vertices_) {
    if (!v.allFinite()) throw InvalidMeshError("non-finite vertex coordinate");
  }
  for (auto& tet : tets_) {
    for (int i : tet) {
      if (i < 0 || i >= n) throw InvalidMeshError("tet vertex index out of range");
    }
    double vol = signed_volume(vertices_[tet[0]], vertices_[tet[1]], vertices_[tet[2]],
                               vertices_[tet[3]]);
    if (!(vol > 0.0)) {
      throw InvalidMeshError("tet with non-positive signed volume");
    }
  }

  boundary_tris_ = extract_boundary(vertices_, tets_, &boundary_owner_);

  // Outward orientation check: the interior vertex of the owning tet must lie
  // on the negative side of each boundary face.
  for (int i = 0; i < num_boundary_tris(); ++i) {
    const auto& tri = boundary_tris_[i];
    const auto& tet = tets_[boundary_owner_[i]];
    int opposite = -1;
    for (int v : tet) {
      if (v != tri[0] && v != tri[1] && v != tri[2]) opposite = v;
    }
    const Vec3 normal =
        (vertices_[tri[1]] - vertices_[tri[0]]).cross(vertices_[tri[2]] - vertices_[tri[0]]);
    if (normal.dot(vertices_[opposite] - vertices_[tri[0]]) >= 0.0) {
      throw InvalidMeshError("boundary face oriented inward");
    }
  }

  on_boundary_.assign(n, 0);
  for (const auto& tri : boundary_tris_) {
    for (int v : tri) on_boundary_[v] = 1;
  }
}

double TetMesh::tet_volume(int t) const {
  const auto& tet = tets_[t];
  return signed_volume(vertices_[tet[0]], vertices_[tet[1]], vertices_[tet[2]],
                       vertices_[tet[3]]);
}

double TetMesh::total_volume() const {
  double v = 0.0;
  for (int t = 0; t < num_tets(); ++t) v += tet_volume(t);
  return v;
}

Vec3 TetMesh::deformed_vertex(int v, const VecX& u) const {
  if (u.size() == 0) return vertices_[v];
  return vertices_[v] + u.segment<3>(3 * v);
}

Vec3 TetMesh::tri_centroid(int tri) const {
  const auto& t = boundary_tris_[tri];
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

Vec3 TetMesh::tri_area_normal(int tri) const {
  const auto& t = boundary_tris_[tri];
  return (vertices_[t[1]] - vertices_[t[0]]).cross(vertices_[t[2]] - vertices_[t[0]]);
}

double TetMesh::tri_area(int tri) const { return 0.5 * tri_area_normal(tri).norm(); }

double TetMesh::diameter() const {
  Vec3 lo = vertices_[0], hi = vertices_[0];
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

TetMesh generate_box_mesh(int nx, int ny, int nz, const Vec3& extents) {
  if (nx < 1 || ny < 1 || nz < 1) {
    throw ConfigError("box mesh cell counts must be >= 1");
  }
  if (!(extents.x() > 0 && extents.y() > 0 && extents.z() > 0)) {
    throw ConfigError("box mesh extents must be positive");
  }

  const int vx = nx + 1, vy = ny + 1, vz = nz + 1;
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<size_t>(vx) * vy * vz);
  for (int k = 0; k < vz; ++k) {
    for (int j = 0; j < vy; ++j) {
      for (int i = 0; i < vx; ++i) {
        vertices.emplace_back(extents.x() * i / nx, extents.y() * j / ny, extents.z() * k / nz);
      }
    }
  }
  auto vid = [&](int i, int j, int k) { return (k * vy + j) * vx + i; };

  // Kuhn split: 6 tets per cell around the main diagonal c0-c6; identical in
  // every cell, so faces match across cell boundaries.
  constexpr int kTets[6][4] = {{0, 1, 2, 6}, {0, 2, 3, 6}, {0, 3, 7, 6},
                               {0, 7, 4, 6}, {0, 4, 5, 6}, {0, 5, 1, 6}};
  std::vector<std::array<int, 4>> tets;
  tets.reserve(static_cast<size_t>(nx) * ny * nz * 6);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int c[8] = {vid(i, j, k),         vid(i + 1, j, k),         vid(i + 1, j + 1, k),
                          vid(i, j + 1, k),     vid(i, j, k + 1),         vid(i + 1, j, k + 1),
                          vid(i + 1, j + 1, k + 1), vid(i, j + 1, k + 1)};
        for (const auto& t : kTets) {
          std::array<int, 4> tet = {c[t[0]], c[t[1]], c[t[2]], c[t[3]]};
          const Vec3 &a = vertices[tet[0]], &b = vertices[tet[1]], &cc = vertices[tet[2]],
                     &d = vertices[tet[3]];
          if ((b - a).cross(cc - a).dot(d - a) < 0.0) std::swap(tet[2], tet[3]);
          tets.push_back(tet);
        }
      }
    }
  }
  return TetMesh(std::move(vertices), std::move(tets));
}

std::vector<int> select_region(const TetMesh& mesh,
                               const std::function<bool(const Vec3&)>& predicate) {
  std::vector<int> out;
  for (int i = 0; i < mesh.num_boundary_tris(); ++i) {
    if (predicate(mesh.tri_centroid(i))) out.push_back(i);
  }
  return out;
}

void RegionLabels::validate(const TetMesh& mesh) const {
  auto check_tris = [&](const std::vector<int>& tris, const char* name) {
    for (int t : tris) {
      if (t < 0 || t >= mesh.num_boundary_tris()) {
        throw ConfigError(std::string(name) + " references invalid boundary triangle");
      }
    }
  };
  check_tris(matching, "matching region");
  check_tris(loaded, "loaded region");
  std::set<int> fixed(fixed_vertices.begin(), fixed_vertices.end());
  for (int v : fixed) {
    if (v < 0 || v >= mesh.num_vertices() || !mesh.on_boundary(v)) {
      throw ConfigError("fixed vertex not on the mesh boundary");
    }
  }
  for (int v : triangle_vertices(mesh, loaded)) {
    if (fixed.count(v)) {
      throw ConfigError("loaded-region vertex is also fixed");
    }
  }
}

std::vector<int> triangle_vertices(const TetMesh& mesh, std::span<const int> tris) {
  std::vector<int> verts;
  for (int t : tris) {
    for (int v : mesh.boundary_tris()[t]) verts.push_back(v);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return verts;
}

}  // namespace elastreg
