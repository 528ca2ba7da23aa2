#include "elastreg/objective.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace elastreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lexicographic (distance, id) comparison keeps the result independent of
// scan order and makes BVH and brute force agree exactly.
inline bool better(double d2, int id, double best_d2, int best_id) {
  return d2 < best_d2 || (d2 == best_d2 && id < best_id);
}

}  // namespace

SurfaceProjector::SurfaceProjector(const TetMesh& mesh, const VecX& u, std::span<const int> tris) {
  if (tris.empty()) throw ConfigError("projection surface is empty");
  tris_.reserve(tris.size());
  for (int id : tris) {
    if (id < 0 || id >= mesh.num_boundary_tris()) {
      throw ConfigError("projection triangle id out of range");
    }
    const auto& t = mesh.boundary_tris()[id];
    tris_.push_back({mesh.deformed_vertex(t[0], u), mesh.deformed_vertex(t[1], u),
                     mesh.deformed_vertex(t[2], u), id});
  }
  nodes_.reserve(2 * tris_.size());
  root_ = build(0, static_cast<int>(tris_.size()));
}

int SurfaceProjector::build(int begin, int end) {
  Node node;
  node.lo = Vec3::Constant(kInf);
  node.hi = Vec3::Constant(-kInf);
  for (int i = begin; i < end; ++i) {
    for (const Vec3* p : {&tris_[i].a, &tris_[i].b, &tris_[i].c}) {
      node.lo = node.lo.cwiseMin(*p);
      node.hi = node.hi.cwiseMax(*p);
    }
  }
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(node);

  if (end - begin <= 4) {
    nodes_[index].begin = begin;
    nodes_[index].end = end;
    return index;
  }

  Vec3 extent = node.hi - node.lo;
  int axis = 0;
  extent.maxCoeff(&axis);
  const int mid = (begin + end) / 2;
  std::nth_element(tris_.begin() + begin, tris_.begin() + mid, tris_.begin() + end,
                   [axis](const Tri& x, const Tri& y) {
                     const double cx = x.a[axis] + x.b[axis] + x.c[axis];
                     const double cy = y.a[axis] + y.b[axis] + y.c[axis];
                     return cx < cy || (cx == cy && x.id < y.id);
                   });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

double SurfaceProjector::box_dist2(const Node& n, const Vec3& y) const {
  double d2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = std::max({n.lo[k] - y[k], 0.0, y[k] - n.hi[k]});
    d2 += d * d;
  }
  return d2;
}

void SurfaceProjector::query(int node_id, const Vec3& y, Projection& best, double& best_d2) const {
  const Node& node = nodes_[node_id];
  if (node.left < 0) {
    for (int i = node.begin; i < node.end; ++i) {
      const Tri& t = tris_[i];
      const TriClosest c = closest_point_on_triangle(y, t.a, t.b, t.c);
      if (better(c.dist2, t.id, best_d2, best.triangle)) {
        best_d2 = c.dist2;
        best = {t.id, c.bary, c.point};
      }
    }
    return;
  }
  const double dl = box_dist2(nodes_[node.left], y);
  const double dr = box_dist2(nodes_[node.right], y);
  const int near = dl <= dr ? node.left : node.right;
  const int far = dl <= dr ? node.right : node.left;
  const double d_near = std::min(dl, dr), d_far = std::max(dl, dr);
  if (d_near <= best_d2) query(near, y, best, best_d2);
  if (d_far <= best_d2) query(far, y, best, best_d2);
}

Projection SurfaceProjector::project(const Vec3& y) const {
  Projection best{std::numeric_limits<int>::max(), Vec3::Zero(), Vec3::Zero()};
  double best_d2 = kInf;
  query(root_, y, best, best_d2);
  return best;
}

std::vector<Projection> SurfaceProjector::project_all(std::span<const Vec3> points,
                                                      Parallel par) const {
  std::vector<Projection> out(points.size());
  if (par == Parallel::OpenMP) {
    const int n = static_cast<int>(points.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = project(points[i]);
  } else {
    for (size_t i = 0; i < points.size(); ++i) out[i] = project(points[i]);
  }
  return out;
}

Projection SurfaceProjector::project_bruteforce(const TetMesh& mesh, const VecX& u,
                                                std::span<const int> tris, const Vec3& y) {
  if (tris.empty()) throw ConfigError("projection surface is empty");
  Projection best{std::numeric_limits<int>::max(), Vec3::Zero(), Vec3::Zero()};
  double best_d2 = kInf;
  for (int id : tris) {
    const auto& t = mesh.boundary_tris()[id];
    const TriClosest c =
        closest_point_on_triangle(y, mesh.deformed_vertex(t[0], u), mesh.deformed_vertex(t[1], u),
                                  mesh.deformed_vertex(t[2], u));
    if (better(c.dist2, id, best_d2, best.triangle)) {
      best_d2 = c.dist2;
      best = {id, c.bary, c.point};
    }
  }
  return best;
}

Projection project_point(const TetMesh& mesh, const VecX& u, std::span<const int> matching_tris,
                         const Vec3& y) {
  return SurfaceProjector::project_bruteforce(mesh, u, matching_tris, y);
}

FunctionalResult functional(const TetMesh& mesh, const VecX& u, const PointCloud& cloud,
                            std::span<const int> matching_tris, Parallel par) {
  cloud.validate();
  const SurfaceProjector projector(mesh, u, matching_tris);
  FunctionalResult result;
  result.projections = projector.project_all(cloud.points, par);
  double sum = 0.0;
  for (size_t j = 0; j < cloud.points.size(); ++j) {
    sum += (result.projections[j].position - cloud.points[j]).squaredNorm();
  }
  result.value = sum / (2.0 * cloud.points.size());
  return result;
}

VecX functional_gradient(const TetMesh& mesh, const VecX& u, const PointCloud& cloud,
                         std::span<const Projection> projections) {
  if (projections.size() != cloud.points.size()) {
    throw ConsistencyError("projection list does not match cloud size");
  }
  const double inv_m = 1.0 / cloud.points.size();
  VecX grad = VecX::Zero(3 * mesh.num_vertices());
  for (size_t j = 0; j < projections.size(); ++j) {
    const Projection& proj = projections[j];
    const auto& tri = mesh.boundary_tris()[proj.triangle];
    const Vec3 recomputed = proj.barycentric[0] * mesh.deformed_vertex(tri[0], u) +
                            proj.barycentric[1] * mesh.deformed_vertex(tri[1], u) +
                            proj.barycentric[2] * mesh.deformed_vertex(tri[2], u);
    if ((recomputed - proj.position).norm() > 1e-9) {
      throw ConsistencyError("stale projection: position does not match current displacement");
    }
    const Vec3 d = inv_m * (proj.position - cloud.points[j]);
    for (int k = 0; k < 3; ++k) {
      grad.segment<3>(3 * tri[k]) += proj.barycentric[k] * d;
    }
  }
  return grad;
}

}  // namespace elastreg
