#include "elastreg/assembly.hpp"

#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace elastreg {

std::vector<ElementRef> element_refs(const TetMesh& mesh) {
  std::vector<ElementRef> refs(mesh.num_tets());
#pragma omp parallel for schedule(static)
  for (int t = 0; t < mesh.num_tets(); ++t) refs[t] = element_ref(mesh, t);
  return refs;
}

namespace {

// Runs the per-element kernel for every tet, serially or with OpenMP, storing
// results in an indexed buffer. Scatter stays with the caller so the global
// accumulation order is the same under both policies.
template <typename Out, typename Kernel>
void for_each_element(const TetMesh& mesh, Parallel par, std::vector<Out>& out,
                      const Kernel& kernel) {
  const int n = mesh.num_tets();
  out.resize(n);
  if (par == Parallel::OpenMP) {
#pragma omp parallel for schedule(static)
    for (int t = 0; t < n; ++t) out[t] = kernel(t);
  } else {
    for (int t = 0; t < n; ++t) out[t] = kernel(t);
  }
}

void check_state(const TetMesh& mesh, const VecX& u) {
  if (u.size() != 3 * mesh.num_vertices()) {
    throw ConsistencyError("displacement size does not match mesh");
  }
  if (!u.allFinite()) throw ConsistencyError("displacement has non-finite entries");
}

}  // namespace

VecX assemble_residual(const TetMesh& mesh, std::span<const ElementRef> refs,
                       const MaterialModel& material, const VecX& u, Parallel par) {
  check_state(mesh, u);
  const LameParameters lame = lame_parameters(material);
  std::vector<Mat34> local;
  for_each_element(mesh, par, local, [&](int t) {
    return element_residual(refs[t], lame, material.kind, gather_element(mesh, t, u));
  });

  VecX f = VecX::Zero(u.size());
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto& tet = mesh.tets()[t];
    for (int i = 0; i < 4; ++i) f.segment<3>(3 * tet[i]) += local[t].col(i);
  }
  return f;
}

SpMat assemble_tangent(const TetMesh& mesh, std::span<const ElementRef> refs,
                       const MaterialModel& material, const VecX& u, Parallel par) {
  check_state(mesh, u);
  const LameParameters lame = lame_parameters(material);
  std::vector<Mat12> local;
  for_each_element(mesh, par, local, [&](int t) {
    return element_tangent(refs[t], lame, material.kind, gather_element(mesh, t, u));
  });

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(mesh.num_tets()) * 144);
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto& tet = mesh.tets()[t];
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) {
            triplets.emplace_back(3 * tet[i] + a, 3 * tet[j] + b, local[t](3 * i + a, 3 * j + b));
          }
        }
      }
    }
  }
  SpMat k(u.size(), u.size());
  k.setFromTriplets(triplets.begin(), triplets.end());
  return k;
}

double strain_energy(const TetMesh& mesh, std::span<const ElementRef> refs,
                     const MaterialModel& material, const VecX& u, Parallel par) {
  check_state(mesh, u);
  const LameParameters lame = lame_parameters(material);
  std::vector<double> local;
  for_each_element(mesh, par, local, [&](int t) {
    return element_energy(refs[t], lame, material.kind, gather_element(mesh, t, u));
  });
  double total = 0.0;
  for (double w : local) total += w;
  return total;
}

VecX assemble_residual(const TetMesh& mesh, const MaterialModel& material, const VecX& u,
                       Parallel par) {
  return assemble_residual(mesh, element_refs(mesh), material, u, par);
}

SpMat assemble_tangent(const TetMesh& mesh, const MaterialModel& material, const VecX& u,
                       Parallel par) {
  return assemble_tangent(mesh, element_refs(mesh), material, u, par);
}

double strain_energy(const TetMesh& mesh, const MaterialModel& material, const VecX& u,
                     Parallel par) {
  return strain_energy(mesh, element_refs(mesh), material, u, par);
}

}  // namespace elastreg
