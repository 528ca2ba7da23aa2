#pragma once

#include "elastreg/elastic_system.hpp"
#include "elastreg/objective.hpp"
#include "elastreg/point_cloud.hpp"

#include <optional>
#include <span>
#include <vector>

namespace elastreg {

/// Solution of the adjoint system at a converged direct solution; zero on
/// fixed dofs.
struct AdjointState {
  VecX p;
};

struct Regularizer {
  enum class Kind { None, Tikhonov };
  Kind kind = Kind::None;
  double weight = 0.0;  // Tikhonov: R(b) = weight/2 * |b|^2
};

struct OptimizerParams {
  int memory = 10;         // L-BFGS history pairs
  int max_iters = 200;
  double grad_rtol = 5e-4;  // stop at |g| <= grad_rtol * |g(b0)|
  double grad_atol = 0.0;   // absolute floor, useful near exact stationarity
  double armijo_c1 = 1e-4;
  int max_line_search = 40;
};

/// One registration problem over the control (the surface force field):
/// observed cloud, admissible support, optional cap and regularizer, and
/// optimizer settings. Mesh, material and labels live in the ElasticSystem.
struct ControlProblem {
  PointCloud cloud;
  std::vector<int> control_vertices;  // sorted unique; support of b
  Regularizer reg;
  std::optional<double> cap;  // max per-vertex force norm (N)
  OptimizerParams params;
};

/// Adjoint solve with rhs = grad J(u_b); thin wrapper that keeps the
/// factorization reuse inside the system.
AdjointState adjoint_solve(ElasticSystem& system, const Displacement& u_b, const VecX& rhs);

struct Evaluation {
  double phi;         // J(u_b) + R(b)
  double j;           // discrepancy term alone
  VecX grad_control;  // gradient of phi wrt the control dofs (masked)
  Displacement u;
};

/// Objective and gradient by the adjoint method: direct solve, functional
/// gradient, adjoint solve, then restriction to the control dofs.
Evaluation objective_and_gradient(ElasticSystem& system, const ControlProblem& problem,
                                  const ForceField& b);

struct OptReport {
  int iterations = 0;
  int evaluations = 0;
  double phi_final = 0.0;
  double j_final = 0.0;
  double grad_norm_initial = 0.0;
  double grad_norm_final = 0.0;
  bool converged = false;
  bool line_search_warning = false;
  std::vector<double> phi_history;        // per accepted iterate
  std::vector<double> grad_norm_history;  // per accepted iterate
  double wall_seconds = 0.0;              // diagnostic only; never serialized
                                          // into deterministic outputs
};

struct MinimizeResult {
  ForceField b;
  Displacement u;
  OptReport report;
};

/// L-BFGS (two-loop recursion) over the masked control dofs, Armijo
/// backtracking line search. With a cap, iterates are projected per vertex
/// onto the norm ball and infeasible L-BFGS directions degrade to projected
/// gradient steps. Line-search failure returns the best iterate with a
/// warning flag rather than throwing.
MinimizeResult minimize(ElasticSystem& system, const ControlProblem& problem,
                        const ForceField& b0);

/// Componentwise sum of nodal forces over `region` (subset of the support).
Vec3 force_resultant(const ForceField& b, std::span<const int> region);

}  // namespace elastreg
