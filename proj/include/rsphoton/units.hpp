#pragma once

#include <cmath>

namespace rsphoton {

/// Physical constants used by every formula. The invariants c = 1/sqrt(eps0 mu0)
/// and Z0 = sqrt(mu0/eps0) hold by construction.
struct Units {
  double hbar = 1.0;
  double c = 1.0;
  double eps0 = 1.0;
  double mu0 = 1.0;
  double Z0 = 1.0;

  static Units from(double hbar, double eps0, double mu0) {
    Units u;
    u.hbar = hbar;
    u.eps0 = eps0;
    u.mu0 = mu0;
    u.c = 1.0 / std::sqrt(eps0 * mu0);
    u.Z0 = std::sqrt(mu0 / eps0);
    return u;
  }

  static Units natural() { return from(1.0, 1.0, 1.0); }

  // CODATA 2018
  static Units si() { return from(1.054571817e-34, 8.8541878128e-12, 1.25663706212e-6); }
};

}  // namespace rsphoton
