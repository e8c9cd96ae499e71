#pragma once

#include <string>

#include "nls/field.hpp"

namespace nls {

enum class Regime { Subcritical, Critical, Supercritical };

const char* to_string(Regime r);

struct CriticalityReport {
  Real q_crit = 0;
  Regime mass = Regime::Subcritical;    // q_crit vs 0
  Regime energy = Regime::Subcritical;  // q_crit vs 1
  Regime hq = Regime::Subcritical;      // q_crit vs q
};

// (N eta - 2) / (2 eta)
Real critical_exponent(int dims, int eta);
CriticalityReport classify(int dims, int eta, Real q);

// theta^{1/eta} f(theta x) by trigonometric interpolation on the same grid; time stamp becomes t / theta^2.
// Throws SupportOverflow when more than `tol` of the mass or spectral energy would leave the box.
Field rescale(const Field& f, Real theta, int eta, Real tol = 1e-8);

}  // namespace nls
