#pragma once

#include "elastreg/element_kernels.hpp"
#include "elastreg/fields.hpp"
#include "elastreg/material.hpp"
#include "elastreg/tet_mesh.hpp"

#include <span>

namespace elastreg {

// Global assembly of the hyperelastic residual F(u), its tangent and the
// strain energy. The OpenMP path computes per-element kernels in parallel and
// scatters serially in element order, so both policies produce bit-identical
// results.

/// Internal nodal force vector F(u), full size (3 dofs per vertex).
VecX assemble_residual(const TetMesh& mesh, const MaterialModel& material, const VecX& u,
                       Parallel par = kDefaultParallel);

/// Tangent stiffness dF/du at u, symmetric, unconstrained.
SpMat assemble_tangent(const TetMesh& mesh, const MaterialModel& material, const VecX& u,
                       Parallel par = kDefaultParallel);

/// Total strain energy; F(u) is its gradient.
double strain_energy(const TetMesh& mesh, const MaterialModel& material, const VecX& u,
                     Parallel par = kDefaultParallel);

// Variants reusing precomputed element geometry (hot path for Newton loops).
VecX assemble_residual(const TetMesh& mesh, std::span<const ElementRef> refs,
                       const MaterialModel& material, const VecX& u, Parallel par);
SpMat assemble_tangent(const TetMesh& mesh, std::span<const ElementRef> refs,
                       const MaterialModel& material, const VecX& u, Parallel par);
double strain_energy(const TetMesh& mesh, std::span<const ElementRef> refs,
                     const MaterialModel& material, const VecX& u, Parallel par);

}  // namespace elastreg
