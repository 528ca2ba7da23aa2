#pragma once

#include "elastreg/types.hpp"

namespace elastreg {

enum class MaterialKind { Linear, StVenantKirchhoff };

/// Isotropic elastic constitutive law. Linear uses the small-strain tensor,
/// StVenantKirchhoff the Green-Lagrange tensor; both share the Lame moduli.
struct MaterialModel {
  MaterialKind kind = MaterialKind::Linear;
  double young_modulus = 1.0;   // Pa
  double poisson_ratio = 0.4;   // in (0, 0.5)

  void validate() const {
    if (!(young_modulus > 0.0)) throw ConfigError("Young modulus must be positive");
    // nu = 0.5 makes lambda diverge; nu = 0 is legal (decoupled shear).
    if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5)) {
      throw ConfigError("Poisson ratio must lie in [0, 0.5)");
    }
  }
};

struct LameParameters {
  double lambda;  // Pa
  double mu;      // Pa
};

inline LameParameters lame_parameters(const MaterialModel& m) {
  m.validate();
  const double e = m.young_modulus, nu = m.poisson_ratio;
  return {e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), e / (2.0 * (1.0 + nu))};
}

}  // namespace elastreg
