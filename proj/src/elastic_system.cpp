#include "elastreg/elastic_system.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace elastreg {

VecX DofMap::restrict_free(const VecX& full) const {
  VecX r(n_free());
  for (int i = 0; i < n_free(); ++i) r[i] = full[free_to_full[i]];
  return r;
}

VecX DofMap::extend_free(const VecX& reduced) const {
  VecX full = VecX::Zero(n_full());
  for (int i = 0; i < n_free(); ++i) full[free_to_full[i]] = reduced[i];
  return full;
}

SpMat DofMap::reduce(const SpMat& full) const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(full.nonZeros());
  for (int col = 0; col < full.outerSize(); ++col) {
    const int rc = full_to_free[col];
    if (rc < 0) continue;
    for (SpMat::InnerIterator it(full, col); it; ++it) {
      const int rr = full_to_free[it.row()];
      if (rr >= 0) triplets.emplace_back(rr, rc, it.value());
    }
  }
  SpMat reduced(n_free(), n_free());
  reduced.setFromTriplets(triplets.begin(), triplets.end());
  return reduced;
}

DofMap make_dof_map(int num_vertices, std::span<const int> fixed_vertices) {
  std::vector<char> fixed(num_vertices, 0);
  for (int v : fixed_vertices) {
    if (v < 0 || v >= num_vertices) throw ConfigError("fixed vertex out of range");
    fixed[v] = 1;
  }
  DofMap map;
  map.full_to_free.assign(3 * num_vertices, -1);
  for (int v = 0; v < num_vertices; ++v) {
    if (fixed[v]) continue;
    for (int c = 0; c < 3; ++c) {
      map.full_to_free[3 * v + c] = static_cast<int>(map.free_to_full.size());
      map.free_to_full.push_back(3 * v + c);
    }
  }
  return map;
}

void ReducedSolver::factorize(const SpMat& a) {
  matrix_ = a;
  ldlt_.compute(matrix_);
  used_cg_ = (ldlt_.info() != Eigen::Success);
  ready_ = true;
}

VecX ReducedSolver::solve(const VecX& rhs) const {
  if (!ready_) throw SolverError("solver used before factorization");
  if (!used_cg_) return ldlt_.solve(rhs);
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-10);
  cg.setMaxIterations(10 * matrix_.rows());
  cg.compute(matrix_);
  VecX x = cg.solve(rhs);
  if (cg.info() != Eigen::Success) {
    throw SolverError("conjugate-gradient fallback did not converge", cg.error());
  }
  return x;
}

ElasticSystem::ElasticSystem(const TetMesh& mesh, const MaterialModel& material,
                             const RegionLabels& labels, NewtonParams newton)
    : mesh_(mesh), material_(material), labels_(labels), newton_(newton) {
  material_.validate();
  labels_.validate(mesh_);
  dofs_ = make_dof_map(mesh_.num_vertices(), labels_.fixed_vertices);
  refs_ = element_refs(mesh_);
}

void ElasticSystem::require_constrained() const {
  if (labels_.fixed_vertices.empty()) {
    throw ConfigError("empty fixed set: the equilibrium system is singular");
  }
}

VecX ElasticSystem::residual(const VecX& u, Parallel par) const {
  return assemble_residual(mesh_, refs_, material_, u, par);
}

SpMat ElasticSystem::tangent(const VecX& u, Parallel par) const {
  return assemble_tangent(mesh_, refs_, material_, u, par);
}

const ReducedSolver& ElasticSystem::linear_solver() {
  if (!linear_solver_) {
    linear_solver_ = std::make_unique<ReducedSolver>();
    const VecX zero = VecX::Zero(3 * mesh_.num_vertices());
    linear_solver_->factorize(dofs_.reduce(tangent(zero)));
    ++stats_.factorizations;
  }
  return *linear_solver_;
}

Displacement ElasticSystem::solve_direct(const ForceField& b) {
  require_constrained();
  ++stats_.direct_solves;
  const VecX b_free = dofs_.restrict_free(b.values);
  const double tol = newton_.tol * (1.0 + b_free.norm());

  VecX u = VecX::Zero(3 * mesh_.num_vertices());
  VecX r_free = b_free - dofs_.restrict_free(residual(u));
  double r_norm = r_free.norm();

  for (int it = 0; it < newton_.max_iters; ++it) {
    if (r_norm <= tol) return Displacement(u);

    VecX delta;
    if (material_.kind == MaterialKind::Linear) {
      delta = linear_solver().solve(r_free);
    } else {
      ReducedSolver solver;
      solver.factorize(dofs_.reduce(tangent(u)));
      ++stats_.factorizations;
      delta = solver.solve(r_free);
    }
    ++stats_.linear_solves;

    const VecX step = dofs_.extend_free(delta);
    double alpha = 1.0;
    VecX u_best;
    VecX r_best;
    double best_norm = std::numeric_limits<double>::infinity();
    for (int h = 0; h <= newton_.max_halvings; ++h) {
      VecX u_try = u + alpha * step;
      VecX r_try = b_free - dofs_.restrict_free(residual(u_try));
      const double n_try = r_try.norm();
      if (n_try < best_norm) {
        best_norm = n_try;
        u_best = std::move(u_try);
        r_best = std::move(r_try);
      }
      if (n_try < r_norm) break;
      alpha *= 0.5;
    }
    u = std::move(u_best);
    r_free = std::move(r_best);
    r_norm = best_norm;
    ++stats_.newton_iterations;
  }
  if (r_norm <= tol) return Displacement(u);

  std::ostringstream msg;
  msg << "Newton did not converge after " << newton_.max_iters
      << " iterations; last residual norm " << r_norm;
  throw SolverError(msg.str(), r_norm);
}

VecX ElasticSystem::solve_adjoint(const Displacement& u_b, const VecX& rhs) {
  require_constrained();
  ++stats_.adjoint_solves;
  const VecX rhs_free = dofs_.restrict_free(rhs);
  VecX p_free;
  if (material_.kind == MaterialKind::Linear) {
    // Tangent is constant and symmetric: reuse the direct factorization.
    p_free = linear_solver().solve(rhs_free);
  } else {
    ReducedSolver solver;
    // The SVK tangent is symmetric, so the transposed system is the system.
    solver.factorize(dofs_.reduce(tangent(u_b.u)));
    ++stats_.factorizations;
    p_free = solver.solve(rhs_free);
  }
  ++stats_.linear_solves;
  return dofs_.extend_free(p_free);
}

}  // namespace elastreg
