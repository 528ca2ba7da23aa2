#pragma once

#include "elastreg/assembly.hpp"
#include "elastreg/fields.hpp"
#include "elastreg/material.hpp"
#include "elastreg/tet_mesh.hpp"

#include <Eigen/SparseCholesky>
#include <memory>
#include <span>
#include <vector>

namespace elastreg {

/// Maps full dofs (3 per vertex) to the reduced free-dof system obtained by
/// eliminating fixed-vertex rows and columns.
struct DofMap {
  std::vector<int> full_to_free;  // -1 on fixed dofs
  std::vector<int> free_to_full;

  int n_free() const { return static_cast<int>(free_to_full.size()); }
  int n_full() const { return static_cast<int>(full_to_free.size()); }

  VecX restrict_free(const VecX& full) const;
  VecX extend_free(const VecX& reduced) const;  // zero on fixed dofs
  SpMat reduce(const SpMat& full) const;
};

DofMap make_dof_map(int num_vertices, std::span<const int> fixed_vertices);

/// Sparse symmetric solve: LDLT factorization with a conjugate-gradient
/// fallback when the factorization reports a failure.
class ReducedSolver {
 public:
  void factorize(const SpMat& a);
  VecX solve(const VecX& rhs) const;
  bool used_cg() const { return used_cg_; }

 private:
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  SpMat matrix_;  // kept for the CG fallback
  bool used_cg_ = false;
  bool ready_ = false;
};

struct NewtonParams {
  double tol = 1e-9;      // relative: converged when |r_free| <= tol * (1 + |b|)
  int max_iters = 50;
  int max_halvings = 30;
};

/// Instrumentation counters; cumulative until reset_stats().
struct SolveStats {
  long direct_solves = 0;
  long adjoint_solves = 0;
  long factorizations = 0;
  long linear_solves = 0;
  long newton_iterations = 0;
};

/// The static equilibrium problem F(u) = b on one mesh with one material and
/// one fixed-vertex set. Owns the dof elimination and, for the Linear
/// material, a single stiffness factorization reused by every direct and
/// adjoint solve.
class ElasticSystem {
 public:
  ElasticSystem(const TetMesh& mesh, const MaterialModel& material, const RegionLabels& labels,
                NewtonParams newton = {});

  const TetMesh& mesh() const { return mesh_; }
  const MaterialModel& material() const { return material_; }
  const RegionLabels& labels() const { return labels_; }
  const DofMap& dofs() const { return dofs_; }

  /// Solves F(u) = b with u = 0 on fixed vertices. Linear: one constrained
  /// symmetric solve. SVK: Newton with halving line search on residual-norm
  /// increase; throws SolverError on non-convergence.
  Displacement solve_direct(const ForceField& b);

  /// Solves the constrained transposed-tangent system at u_b; rhs is a
  /// full-size nodal vector. Returns a full-size vector, zero on fixed dofs.
  VecX solve_adjoint(const Displacement& u_b, const VecX& rhs);

  VecX residual(const VecX& u, Parallel par = kDefaultParallel) const;
  SpMat tangent(const VecX& u, Parallel par = kDefaultParallel) const;

  const SolveStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

 private:
  const ReducedSolver& linear_solver();
  void require_constrained() const;

  const TetMesh& mesh_;
  MaterialModel material_;
  RegionLabels labels_;
  NewtonParams newton_;
  DofMap dofs_;
  std::vector<ElementRef> refs_;
  std::unique_ptr<ReducedSolver> linear_solver_;  // Linear material only
  SolveStats stats_;
};

}  // namespace elastreg
