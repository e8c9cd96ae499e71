#include "nls/field.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <sstream>

namespace nls {

Field::Field(GridPtr grid, CArray values, Real time)
    : grid_(std::move(grid)), values_(std::move(values)), time_(time) {
  if (!grid_) throw Error(ErrorCode::InvalidArgument, "field requires a grid");
  if (values_.size() != grid_->size()) {
    std::ostringstream os;
    os << "field has " << values_.size() << " values, grid has " << grid_->size() << " points";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  if (!std::isfinite(time_)) throw Error(ErrorCode::CorruptState, "non-finite time stamp");
  if (!values_.real().isFinite().all() || !values_.imag().isFinite().all())
    throw Error(ErrorCode::CorruptState, "field contains NaN or Inf");
}

Field Field::zeros(GridPtr grid, Real time) {
  const Index n = grid->size();
  return Field(std::move(grid), CArray::Zero(n), time);
}

void Params::validate() const {
  if (dims < 1 || dims > 3) throw Error(ErrorCode::HypothesisViolation, "dimension N must be 1, 2 or 3");
  if (eta < 1) throw Error(ErrorCode::HypothesisViolation, "eta must be a positive integer");
  if (!std::isfinite(lambda)) throw Error(ErrorCode::HypothesisViolation, "lambda must be finite");
  if (2 * q <= dims) {
    std::ostringstream os;
    os << "H^q local existence requires q > N/2 (q = " << q << ", N = " << dims << ")";
    throw Error(ErrorCode::HypothesisViolation, os.str());
  }
  if (q < eta) {
    std::ostringstream os;
    os << "H^q local existence requires q >= eta (q = " << q << ", eta = " << eta << ")";
    throw Error(ErrorCode::HypothesisViolation, os.str());
  }
}

Real lp_norm(const Field& f, Real p) {
  if (std::isinf(p) && p > 0) return f.values().abs().maxCoeff();
  if (!(p >= 1)) throw Error(ErrorCode::InvalidArgument, "Lebesgue exponent must be >= 1");
  const Grid& g = f.grid();
  if (p == 2) return std::sqrt(integrate(g, f.values().abs2()));
  return std::pow(integrate(g, f.values().abs().pow(p)), 1.0 / p);
}

Real sobolev_norm_spectral(const Grid& grid, const CArray& fhat, Real q) {
  const RArray w = (1.0 + grid.xi2()).pow(q);
  return std::sqrt(parseval_weight(grid) * (w * fhat.abs2()).sum());
}

Real sobolev_norm(const Field& f, Real q) {
  if (q < 0) throw Error(ErrorCode::InvalidArgument, "Sobolev index must be >= 0");
  if (q == 0) return lp_norm(f, 2);
  return sobolev_norm_spectral(f.grid(), f.grid().forward(f.values()), q);
}

Real homogeneous_sobolev_norm(const Field& f, Real s) {
  if (s == 0) return lp_norm(f, 2);
  const Grid& g = f.grid();
  const CArray fhat = g.forward(f.values());
  const CArray weighted = fractional_multiplier(g, fhat, s);
  return std::sqrt(parseval_weight(g) * (weighted * fhat.conjugate()).real().sum());
}

Real sobolev_embedding_constant(int dims, Real q) {
  if (dims < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  if (!(2 * q > dims)) throw Error(ErrorCode::DivergentIntegral, "embedding integral diverges for 2q <= N");
  // r = tan(theta): integral of r^{N-1} <r>^{-2q} dr over [0, inf).
  const Real a = dims - 1;
  const Real b = 2 * q - dims - 1;
  auto integrand = [a, b](Real theta) {
    return std::pow(std::sin(theta), a) * std::pow(std::cos(theta), b);
  };
  boost::math::quadrature::tanh_sinh<Real> quad;
  const Real radial = quad.integrate(integrand, 0.0, kPi / 2, 1e-13);
  const Real sphere = 2 * std::pow(kPi, dims / 2.0) / std::tgamma(dims / 2.0);
  return std::sqrt(sphere * radial);
}

Real embedding_check(const Field& f, Real q) {
  const Real num = lp_norm(f, kInf);
  const Real den = sobolev_norm(f, q);
  if (den == 0) return 0;
  return num / den;
}

}  // namespace nls
