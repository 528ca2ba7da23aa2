#pragma once

#include "elastreg/material.hpp"
#include "elastreg/tet_mesh.hpp"
#include "elastreg/types.hpp"

#include <vector>

namespace elastreg {

using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat6x12 = Eigen::Matrix<double, 6, 12>;

/// Reference-configuration data of one P1 tet: constant shape-function
/// gradients (columns = nodes 0..3) and volume.
struct ElementRef {
  Mat34 grad;
  double volume;
};

inline ElementRef element_ref(const TetMesh& mesh, int t) {
  const auto& tet = mesh.tets()[t];
  const Vec3& x0 = mesh.vertices()[tet[0]];
  Mat3 d;
  d.col(0) = mesh.vertices()[tet[1]] - x0;
  d.col(1) = mesh.vertices()[tet[2]] - x0;
  d.col(2) = mesh.vertices()[tet[3]] - x0;
  ElementRef ref;
  ref.volume = d.determinant() / 6.0;
  const Mat3 dinv_t = d.inverse().transpose();
  ref.grad.col(1) = dinv_t.col(0);
  ref.grad.col(2) = dinv_t.col(1);
  ref.grad.col(3) = dinv_t.col(2);
  ref.grad.col(0) = -(ref.grad.col(1) + ref.grad.col(2) + ref.grad.col(3));
  return ref;
}

std::vector<ElementRef> element_refs(const TetMesh& mesh);

/// Gather the 4 nodal displacement vectors of tet t.
inline Mat34 gather_element(const TetMesh& mesh, int t, const VecX& u) {
  const auto& tet = mesh.tets()[t];
  Mat34 ue;
  for (int i = 0; i < 4; ++i) ue.col(i) = u.segment<3>(3 * tet[i]);
  return ue;
}

/// Isotropic 6x6 elasticity matrix in Voigt order (11,22,33,12,23,13) with
/// engineering shear strains.
inline Mat6 isotropic_voigt(const LameParameters& lame) {
  Mat6 c = Mat6::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) c(i, j) = lame.lambda;
    c(i, i) += 2.0 * lame.mu;
    c(i + 3, i + 3) = lame.mu;
  }
  return c;
}

namespace detail {

// Total-Lagrangian strain-displacement matrix: column block j maps a nodal
// perturbation du_j to dE in Voigt form with engineering shears. F = I gives
// the small-strain B matrix.
inline Mat6x12 strain_displacement(const Mat34& grad, const Mat3& f) {
  Mat6x12 b;
  for (int j = 0; j < 4; ++j) {
    const Vec3 a = grad.col(j);
    for (int k = 0; k < 3; ++k) {  // perturbation component
      const int col = 3 * j + k;
      b(0, col) = a(0) * f(k, 0);
      b(1, col) = a(1) * f(k, 1);
      b(2, col) = a(2) * f(k, 2);
      b(3, col) = a(0) * f(k, 1) + a(1) * f(k, 0);
      b(4, col) = a(1) * f(k, 2) + a(2) * f(k, 1);
      b(5, col) = a(0) * f(k, 2) + a(2) * f(k, 0);
    }
  }
  return b;
}

inline Vec6 to_voigt(const Mat3& s) {
  Vec6 v;
  v << s(0, 0), s(1, 1), s(2, 2), s(0, 1), s(1, 2), s(0, 2);
  return v;
}

}  // namespace detail

// ---- Linear (small strain) ----

inline double linear_element_energy(const ElementRef& ref, const LameParameters& lame,
                                    const Mat34& ue) {
  const Mat3 h = ue * ref.grad.transpose();
  const Mat3 eps = 0.5 * (h + h.transpose());
  const double tr = eps.trace();
  return ref.volume * (0.5 * lame.lambda * tr * tr + lame.mu * eps.squaredNorm());
}

inline Mat34 linear_element_residual(const ElementRef& ref, const LameParameters& lame,
                                     const Mat34& ue) {
  const Mat3 h = ue * ref.grad.transpose();
  const Mat3 eps = 0.5 * (h + h.transpose());
  Mat3 sigma = 2.0 * lame.mu * eps;
  sigma.diagonal().array() += lame.lambda * eps.trace();
  return ref.volume * sigma * ref.grad;
}

inline Mat12 linear_element_stiffness(const ElementRef& ref, const LameParameters& lame) {
  const Mat6x12 b = detail::strain_displacement(ref.grad, Mat3::Identity());
  Mat12 k = ref.volume * b.transpose() * isotropic_voigt(lame) * b;
  k = 0.5 * (k + k.transpose()).eval();
  return k;
}

// ---- St. Venant-Kirchhoff (Green-Lagrange strain) ----

inline double svk_element_energy(const ElementRef& ref, const LameParameters& lame,
                                 const Mat34& ue) {
  const Mat3 h = ue * ref.grad.transpose();
  const Mat3 e = 0.5 * (h + h.transpose() + h.transpose() * h);
  const double tr = e.trace();
  return ref.volume * (0.5 * lame.lambda * tr * tr + lame.mu * e.squaredNorm());
}

inline Mat34 svk_element_residual(const ElementRef& ref, const LameParameters& lame,
                                  const Mat34& ue) {
  const Mat3 h = ue * ref.grad.transpose();
  const Mat3 f = Mat3::Identity() + h;
  const Mat3 e = 0.5 * (h + h.transpose() + h.transpose() * h);
  Mat3 s = 2.0 * lame.mu * e;
  s.diagonal().array() += lame.lambda * e.trace();
  return ref.volume * f * s * ref.grad;
}

inline Mat12 svk_element_tangent(const ElementRef& ref, const LameParameters& lame,
                                 const Mat34& ue) {
  const Mat3 h = ue * ref.grad.transpose();
  const Mat3 f = Mat3::Identity() + h;
  const Mat3 e = 0.5 * (h + h.transpose() + h.transpose() * h);
  Mat3 s = 2.0 * lame.mu * e;
  s.diagonal().array() += lame.lambda * e.trace();

  // Material part.
  const Mat6x12 b = detail::strain_displacement(ref.grad, f);
  Mat12 k = ref.volume * b.transpose() * isotropic_voigt(lame) * b;

  // Geometric part: per node pair a scaled identity block.
  const Eigen::Matrix4d geo =
      ref.volume * (ref.grad.transpose() * s * ref.grad);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      k.block<3, 3>(3 * i, 3 * j).diagonal().array() += geo(i, j);
    }
  }
  k = 0.5 * (k + k.transpose()).eval();
  return k;
}

// ---- Dispatch on material kind ----

inline double element_energy(const ElementRef& ref, const LameParameters& lame,
                             MaterialKind kind, const Mat34& ue) {
  return kind == MaterialKind::Linear ? linear_element_energy(ref, lame, ue)
                                      : svk_element_energy(ref, lame, ue);
}

inline Mat34 element_residual(const ElementRef& ref, const LameParameters& lame,
                              MaterialKind kind, const Mat34& ue) {
  return kind == MaterialKind::Linear ? linear_element_residual(ref, lame, ue)
                                      : svk_element_residual(ref, lame, ue);
}

inline Mat12 element_tangent(const ElementRef& ref, const LameParameters& lame,
                             MaterialKind kind, const Mat34& ue) {
  return kind == MaterialKind::Linear ? linear_element_stiffness(ref, lame)
                                      : svk_element_tangent(ref, lame, ue);
}

}  // namespace elastreg
