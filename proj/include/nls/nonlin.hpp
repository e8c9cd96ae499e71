#pragma once

#include <optional>

#include "nls/field.hpp"

namespace nls {

// |z|^{2 eta} by repeated multiplication.
inline Real abs_pow_2eta(Real abs2, int eta) {
  Real r = 1;
  for (int i = 0; i < eta; ++i) r *= abs2;
  return r;
}

RArray abs_pow_2eta(const RArray& abs2, int eta);

// lambda |psi|^{2 eta} psi
CArray nonlinearity(const CArray& psi, Real lambda, int eta);
Field apply_nonlinearity(const Field& f, const Params& params);

Complex nonlinearity(Complex a, Real lambda, int eta);

// sigma-th radial derivative of r -> lambda r^{2 eta + 1}, carried with the phase a/|a|.
Complex nonlinearity_derivative(Complex a, int sigma, Real lambda, int eta);

Real h1_ratio(Complex a, Complex b, const Params& params);
Real h2_ratio(Complex a, Complex b, int sigma, const Params& params);

struct GNExponents {
  Real beta = 0;
  Real gamma = 1;
  Real p = 2;
  Real r = 2;
  Real s = 2;
  Real nu = 0;
  int dims = 1;

  // Residual of 1/p = beta/N + (1/r - gamma/N) nu + (1 - nu)/s.
  Real residual() const;
};

// Solves the admissibility relation for nu (given p) or for p (given nu). Exponents may be kInf.
GNExponents gn_solve(Real beta, Real gamma, int dims, Real r, Real s, std::optional<Real> p,
                     std::optional<Real> nu = std::nullopt);

// ||D^beta f||_p / (||D^gamma f||_r^nu ||f||_s^{1-nu}) with D^a the multiplier |xi|^a.
Real gn_check(const Field& f, const GNExponents& e);

}  // namespace nls
