#include "elastreg/control.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

namespace elastreg {

AdjointState adjoint_solve(ElasticSystem& system, const Displacement& u_b, const VecX& rhs) {
  return {system.solve_adjoint(u_b, rhs)};
}

namespace {

double regularizer_value(const Regularizer& reg, const VecX& x) {
  if (reg.kind == Regularizer::Kind::Tikhonov) return 0.5 * reg.weight * x.squaredNorm();
  return 0.0;
}

void add_regularizer_gradient(const Regularizer& reg, const VecX& x, VecX& g) {
  if (reg.kind == Regularizer::Kind::Tikhonov) g += reg.weight * x;
}

// Per-vertex projection onto the norm ball of radius cap.
VecX project_cap(const VecX& x, const std::optional<double>& cap) {
  if (!cap) return x;
  VecX y = x;
  for (Eigen::Index i = 0; i + 2 < y.size(); i += 3) {
    const double n = y.segment<3>(i).norm();
    if (n > *cap) y.segment<3>(i) *= (*cap / n);
  }
  return y;
}

struct Pair {
  VecX s, y;
  double rho;
};

// Two-loop recursion: returns H*g with H the implicit inverse Hessian.
VecX two_loop(const VecX& g, const std::deque<Pair>& pairs, double gamma) {
  VecX q = g;
  std::vector<double> alpha(pairs.size());
  for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
    alpha[i] = pairs[i].rho * pairs[i].s.dot(q);
    q -= alpha[i] * pairs[i].y;
  }
  q *= gamma;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const double beta = pairs[i].rho * pairs[i].y.dot(q);
    q += (alpha[i] - beta) * pairs[i].s;
  }
  return q;
}

}  // namespace

Evaluation objective_and_gradient(ElasticSystem& system, const ControlProblem& problem,
                                  const ForceField& b) {
  if (b.support != problem.control_vertices) {
    throw ConsistencyError("force field support does not match the control set");
  }

  Displacement u = system.solve_direct(b);
  FunctionalResult fr = functional(system.mesh(), u.u, problem.cloud, system.labels().matching);
  const VecX grad_j = functional_gradient(system.mesh(), u.u, problem.cloud, fr.projections);
  const AdjointState adjoint = adjoint_solve(system, u, grad_j);

  Evaluation eval;
  eval.j = fr.value;
  eval.u = std::move(u);
  eval.grad_control.resize(3 * problem.control_vertices.size());
  for (size_t i = 0; i < problem.control_vertices.size(); ++i) {
    eval.grad_control.segment<3>(3 * i) = adjoint.p.segment<3>(3 * problem.control_vertices[i]);
  }
  const VecX x = b.to_control();
  eval.phi = eval.j + regularizer_value(problem.reg, x);
  add_regularizer_gradient(problem.reg, x, eval.grad_control);
  return eval;
}

MinimizeResult minimize(ElasticSystem& system, const ControlProblem& problem,
                        const ForceField& b0) {
  const auto t_start = std::chrono::steady_clock::now();
  const OptimizerParams& prm = problem.params;
  if (!(prm.grad_rtol > 0.0)) throw ConfigError("grad_rtol must be positive");
  if (problem.cap && !(*problem.cap > 0.0)) throw ConfigError("cap must be positive");

  ForceField b = b0;
  if (b.support != problem.control_vertices) {
    throw ConsistencyError("initial control support does not match the control set");
  }

  OptReport report;
  auto eval_at = [&](const VecX& x) {
    b.set_from_control(x);
    ++report.evaluations;
    return objective_and_gradient(system, problem, b);
  };

  VecX x = project_cap(b0.to_control(), problem.cap);
  Evaluation cur = eval_at(x);
  const double g0 = cur.grad_control.norm();
  report.grad_norm_initial = g0;
  report.phi_history.push_back(cur.phi);
  report.grad_norm_history.push_back(g0);
  const double stop_tol = std::max(prm.grad_rtol * g0, prm.grad_atol);

  VecX best_x = x;
  Evaluation best = cur;

  std::deque<Pair> pairs;
  double gamma = 1.0;
  report.converged = (g0 <= stop_tol);

  for (int iter = 1; !report.converged && iter <= prm.max_iters; ++iter) {
    VecX g = cur.grad_control;
    VecX d = -two_loop(g, pairs, gamma);
    bool is_gradient_dir = pairs.empty();
    if (g.dot(d) >= -1e-14 * g.norm() * d.norm()) {
      d = -g;  // not a descent direction; fall back to steepest descent
      is_gradient_dir = true;
      pairs.clear();
    }

    // Line search. Without curvature history the unit step has no natural
    // scale, so fit a quadratic through phi(0), phi'(0), phi(1) and jump to
    // its minimizer; afterwards standard Armijo backtracking from alpha = 1.
    bool accepted = false;
    VecX x_new;
    Evaluation next;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const double gd = g.dot(d);
      double alpha = 1.0;
      if (pairs.empty()) {
        const VecX x_trial = project_cap(x + d, problem.cap);
        const Evaluation trial = eval_at(x_trial);
        const VecX step = x_trial - x;
        const double slope = g.dot(step);
        const double curvature = 2.0 * (trial.phi - cur.phi - slope);
        if (curvature > 0.0 && slope < 0.0) {
          alpha = std::clamp(-slope / curvature, 1e-12, 1e12);
        } else if (trial.phi < cur.phi + prm.armijo_c1 * slope) {
          x_new = x_trial;
          next = trial;
          accepted = true;
          break;
        }
      }
      for (int ls = 0; ls < prm.max_line_search; ++ls) {
        const VecX x_trial = project_cap(x + alpha * d, problem.cap);
        const VecX step = x_trial - x;
        if (step.isZero(0.0)) break;  // projection collapsed the step
        const Evaluation trial = eval_at(x_trial);
        if (trial.phi <= cur.phi + prm.armijo_c1 * g.dot(step)) {
          x_new = x_trial;
          next = trial;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      (void)gd;
      if (!accepted && !is_gradient_dir) {
        // L-BFGS direction failed (infeasible or no decrease): degrade to a
        // projected gradient step.
        d = -g;
        is_gradient_dir = true;
        pairs.clear();
      } else {
        break;
      }
    }

    if (!accepted) {
      report.line_search_warning = true;
      break;
    }

    const VecX s = x_new - x;
    const VecX yv = next.grad_control - cur.grad_control;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      pairs.push_back({s, yv, 1.0 / sy});
      if (static_cast<int>(pairs.size()) > prm.memory) pairs.pop_front();
      gamma = sy / yv.squaredNorm();
    }

    x = std::move(x_new);
    cur = std::move(next);
    report.iterations = iter;
    report.phi_history.push_back(cur.phi);
    const double gn = cur.grad_control.norm();
    report.grad_norm_history.push_back(gn);
    if (cur.phi < best.phi) {
      best_x = x;
      best = cur;
    }
    report.converged = (gn <= stop_tol);
  }

  if (cur.phi <= best.phi) {
    best_x = x;
    best = cur;
  }
  b.set_from_control(best_x);
  report.phi_final = best.phi;
  report.j_final = best.j;
  report.grad_norm_final = best.grad_control.norm();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  MinimizeResult result;
  result.b = std::move(b);
  result.u = std::move(best.u);
  result.report = std::move(report);
  return result;
}

Vec3 force_resultant(const ForceField& b, std::span<const int> region) {
  return b.resultant(region);
}

}  // namespace elastreg
