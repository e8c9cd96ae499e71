#include "nls/nonlin.hpp"

#include <cmath>
#include <sstream>

namespace nls {

RArray abs_pow_2eta(const RArray& abs2, int eta) {
  RArray r = RArray::Ones(abs2.size());
  for (int i = 0; i < eta; ++i) r *= abs2;
  return r;
}

CArray nonlinearity(const CArray& psi, Real lambda, int eta) {
  return psi * (lambda * abs_pow_2eta(psi.abs2(), eta)).cast<Complex>();
}

Field apply_nonlinearity(const Field& f, const Params& params) {
  return f.with_values(nonlinearity(f.values(), params.lambda, params.eta));
}

Complex nonlinearity(Complex a, Real lambda, int eta) {
  return lambda * abs_pow_2eta(std::norm(a), eta) * a;
}

Complex nonlinearity_derivative(Complex a, int sigma, Real lambda, int eta) {
  const int top = 2 * eta + 1;
  if (sigma < 0 || sigma > top) throw Error(ErrorCode::InvalidArgument, "derivative order out of range");
  const Real r = std::abs(a);
  Real coeff = lambda;
  for (int j = 0; j < sigma; ++j) coeff *= (top - j);
  if (r == 0) return top - sigma == 0 ? Complex(coeff) : Complex(0);
  return coeff * std::pow(r, top - sigma) * (a / r);
}

Real h1_ratio(Complex a, Complex b, const Params& params) {
  const Real den = std::abs(a - b) *
                   (abs_pow_2eta(std::norm(a), params.eta) + abs_pow_2eta(std::norm(b), params.eta));
  if (den == 0) throw Error(ErrorCode::DegenerateDenominator, "h1 ratio denominator vanishes");
  return std::abs(nonlinearity(a, params.lambda, params.eta) - nonlinearity(b, params.lambda, params.eta)) / den;
}

Real h2_ratio(Complex a, Complex b, int sigma, const Params& params) {
  if (sigma < 0 || sigma > 2 * params.eta)
    throw Error(ErrorCode::InvalidArgument, "h2 ratio requires 0 <= sigma <= 2 eta");
  const int e = 2 * params.eta - sigma;
  const Real den = std::abs(a - b) * (std::pow(std::abs(a), e) + std::pow(std::abs(b), e));
  if (den == 0) throw Error(ErrorCode::DegenerateDenominator, "h2 ratio denominator vanishes");
  const Complex fa = nonlinearity_derivative(a, sigma, params.lambda, params.eta);
  const Complex fb = nonlinearity_derivative(b, sigma, params.lambda, params.eta);
  return std::abs(fa - fb) / den;
}

namespace {

Real inv(Real x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

}  // namespace

Real GNExponents::residual() const {
  return inv(p) - (beta / dims + (inv(r) - gamma / dims) * nu + (1 - nu) * inv(s));
}

GNExponents gn_solve(Real beta, Real gamma, int dims, Real r, Real s, std::optional<Real> p,
                     std::optional<Real> nu) {
  if (!(gamma > 0) || beta < 0 || dims < 1) throw Error(ErrorCode::InvalidArgument, "need gamma > 0, beta >= 0, N >= 1");
  if (!(r >= 1) || !(s >= 1)) throw Error(ErrorCode::InadmissibleExponents, "Lebesgue exponents must be >= 1");
  if (p.has_value() == nu.has_value()) throw Error(ErrorCode::InvalidArgument, "give exactly one of p and nu");
  constexpr Real tol = 1e-12;
  GNExponents e;
  e.beta = beta;
  e.gamma = gamma;
  e.dims = dims;
  e.r = r;
  e.s = s;
  const Real lo = beta / gamma;
  if (p) {
    if (!(*p >= 1)) throw Error(ErrorCode::InadmissibleExponents, "p must be >= 1");
    e.p = *p;
    const Real num = inv(*p) - beta / dims - inv(s);
    const Real den = inv(r) - gamma / dims - inv(s);
    if (std::abs(den) < tol) {
      if (std::abs(num) > tol) throw Error(ErrorCode::InadmissibleExponents, "no interpolation weight satisfies the relation");
      e.nu = lo;
    } else {
      e.nu = num / den;
    }
  } else {
    e.nu = *nu;
    const Real ip = beta / dims + (inv(r) - gamma / dims) * e.nu + (1 - e.nu) * inv(s);
    if (ip < -tol || ip > 1 + tol) throw Error(ErrorCode::InadmissibleExponents, "resulting p is not in [1, inf]");
    e.p = ip <= 0 ? kInf : 1.0 / ip;
  }
  if (e.nu < lo - tol || e.nu > 1 + tol) {
    std::ostringstream os;
    os << "interpolation weight " << e.nu << " outside [" << lo << ", 1]";
    throw Error(ErrorCode::InadmissibleExponents, os.str());
  }
  return e;
}

Real gn_check(const Field& f, const GNExponents& e) {
  const Field db = fractional_laplacian(f, e.beta / 2);
  const Field dg = fractional_laplacian(f, e.gamma / 2);
  const Real num = lp_norm(db, e.p);
  const Real den = std::pow(lp_norm(dg, e.r), e.nu) * std::pow(lp_norm(f, e.s), 1 - e.nu);
  if (den == 0) {
    if (num == 0) return 0;
    throw Error(ErrorCode::DegenerateDenominator, "Gagliardo-Nirenberg denominator vanishes");
  }
  return num / den;
}

}  // namespace nls
