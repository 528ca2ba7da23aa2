#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace elastreg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

/// Execution policy for data-parallel kernels. Serial is the reference
/// implementation; OpenMP must produce bit-identical results.
enum class Parallel { Serial, OpenMP };

#if defined(_OPENMP)
inline constexpr Parallel kDefaultParallel = Parallel::OpenMP;
#else
inline constexpr Parallel kDefaultParallel = Parallel::Serial;
#endif

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or degenerate mesh (bad indices, non-positive volumes,
/// inconsistent face multiplicity).
class InvalidMeshError : public Error {
 public:
  using Error::Error;
};

/// Bad user-supplied configuration (labels, parameters, file contents).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A solve failed to converge or the system is singular.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual_norm = 0.0)
      : Error(what), residual_norm(residual_norm) {}
  double residual_norm;
};

/// Inputs that must agree with each other do not (e.g. stale projections).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace elastreg
