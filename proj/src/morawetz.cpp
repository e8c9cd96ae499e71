#include "nls/morawetz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nls/conserve.hpp"
#include "nls/nonlin.hpp"
#include "nls/parallel.hpp"

namespace nls {

Real bump_profile(Real u, int derivative) {
  if (u <= 1) return derivative == 0 ? 1.0 : 0.0;
  if (u >= 2) return 0.0;
  const Real s = u - 1;
  switch (derivative) {
    case 0: return 1 - s * s * s * (10 - 15 * s + 6 * s * s);
    case 1: return -30 * s * s * (s - 1) * (s - 1);
    case 2: return -60 * s * (s - 1) * (2 * s - 1);
    default: throw Error(ErrorCode::InvalidArgument, "bump derivative order must be 0, 1 or 2");
  }
}

Real WeightFn::value(const Point& z) const {
  switch (kind) {
    case WeightKind::QuadraticAbsX: return z.squaredNorm();
    case WeightKind::PairDistance: return z.norm();
    case WeightKind::RadialBump: return bump_profile(z.norm() / radius);
  }
  return 0;
}

Point WeightFn::gradient(const Point& z) const {
  const Real r = z.norm();
  switch (kind) {
    case WeightKind::QuadraticAbsX: return 2 * z;
    case WeightKind::PairDistance: return r == 0 ? Point(Point::Zero(z.size())) : Point(z / r);
    case WeightKind::RadialBump:
      return r == 0 ? Point(Point::Zero(z.size())) : Point(bump_profile(r / radius, 1) / radius * z / r);
  }
  return Point::Zero(z.size());
}

Eigen::MatrixXd WeightFn::hessian(const Point& z) const {
  const int N = static_cast<int>(z.size());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
  const Real r = z.norm();
  switch (kind) {
    case WeightKind::QuadraticAbsX: return 2 * I;
    case WeightKind::PairDistance: {
      if (r == 0) throw Error(ErrorCode::CoincidentPoints, "Hessian of |x - y| is singular at x = y");
      const Point u = z / r;
      return (I - u * u.transpose()) / r;
    }
    case WeightKind::RadialBump: {
      if (r == 0) return Eigen::MatrixXd::Zero(N, N);
      const Point u = z / r;
      const Real d1 = bump_profile(r / radius, 1) / radius;
      const Real d2 = bump_profile(r / radius, 2) / (radius * radius);
      return d2 * u * u.transpose() + d1 / r * (I - u * u.transpose());
    }
  }
  return Eigen::MatrixXd::Zero(N, N);
}

Real WeightFn::laplacian(const Point& z) const {
  const int N = static_cast<int>(z.size());
  switch (kind) {
    case WeightKind::QuadraticAbsX: return 2.0 * N;
    case WeightKind::PairDistance: {
      const Real r = z.norm();
      if (r == 0) throw Error(ErrorCode::CoincidentPoints, "Laplacian of |x - y| is singular at x = y");
      return (N - 1) / r;
    }
    case WeightKind::RadialBump: return hessian(z).trace();
  }
  return 0;
}

Constants Constants::for_dims(int dims) {
  if (dims < 1 || dims > 3) throw Error(ErrorCode::InvalidArgument, "dimension must be 1, 2 or 3");
  Constants c;
  c.dims = dims;
  if (dims == 1) {
    c.C_N_pi = 0;
    c.riesz = kInf;
    return c;
  }
  const Real g = std::tgamma((dims - 1) / 2.0);
  const Real sqrt_pi = std::sqrt(kPi);
  c.C_N_pi = 4 * std::pow(kPi, 1.5) * sqrt_pi / g;
  c.riesz = std::pow(kPi, dims / 2.0) * std::pow(2.0, dims - 1) * g / sqrt_pi;
  return c;
}

Real morawetz_11(const Field& f, const WeightFn& w) {
  const Grid& g = f.grid();
  const auto q = current(f);
  RArray integrand = RArray::Zero(g.size());
  if (w.kind == WeightKind::QuadraticAbsX) {
    for (int d = 0; d < g.dims(); ++d) integrand += 2.0 * g.coord(d) * q[d];
  } else {
    Point x(g.dims());
    for (Index p = 0; p < g.size(); ++p) {
      for (int d = 0; d < g.dims(); ++d) x[d] = g.coord(d)[p];
      const Point gw = w.gradient(x);
      Real s = 0;
      for (int d = 0; d < g.dims(); ++d) s += gw[d] * q[d][p];
      integrand[p] = s;
    }
  }
  return integrate(g, integrand);
}

Real morawetz_22_direct(const Field& f) {
  const Grid& g = f.grid();
  const int N = g.dims();
  const Index M = g.size();
  const auto q = current(f);
  const RArray rho = f.density();
  std::vector<Real> part(static_cast<std::size_t>(M));
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t i) {
    const Index x = static_cast<Index>(i);
    Real acc = 0;
    for (Index y = 0; y < M; ++y) {
      if (y == x) continue;
      Real r2 = 0;
      for (int d = 0; d < N; ++d) {
        const Real z = g.coord(d)[x] - g.coord(d)[y];
        r2 += z * z;
      }
      const Real r = std::sqrt(r2);
      Real dot = 0;
      for (int d = 0; d < N; ++d) {
        const Real z = g.coord(d)[x] - g.coord(d)[y];
        dot += z / r * q[d][x];
      }
      acc += rho[y] * dot;
    }
    part[i] = acc;
  });
  Real total = 0;
  for (Real v : part) total += v;
  return total * g.cell_volume() * g.cell_volume();
}

Real morawetz_22_fft(const Field& f) {
  const Grid& g = f.grid();
  const auto q = current(f);
  PairConvolver conv(g, Diagonal::Zero);
  const auto v = conv.unit_vector(f.density());
  RArray integrand = RArray::Zero(g.size());
  for (int d = 0; d < g.dims(); ++d) integrand += q[d] * v[d];
  return integrate(g, integrand);
}

Real morawetz_22(const Field& f) { return f.size() <= 4096 ? morawetz_22_direct(f) : morawetz_22_fft(f); }

PseudoConformal pseudo_conformal(const Field& f, const RArray& h, const Params& params) {
  const Grid& g = f.grid();
  const int N = g.dims();
  const Real t = f.time();
  const RArray rho = f.density();
  RArray x2 = RArray::Zero(g.size());
  for (int d = 0; d < N; ++d) x2 += g.coord(d).square();

  PseudoConformal P;
  P.t = t;
  P.moment = integrate(g, x2 * rho);
  P.kinetic = 4 * t * t * (2 * kinetic_energy(f));
  const auto q = current(f);
  RArray xq = RArray::Zero(g.size());
  for (int d = 0; d < N; ++d) xq += g.coord(d) * q[d];
  P.cross = -4 * t * integrate(g, xq);
  P.potential = 4 * t * t * params.lambda / (params.eta + 1.0) * potential_integral(f, params.eta);
  P.history = -2.0 * N * integrate(g, laplacian(g, h.cast<Complex>()).real());
  P.total = P.moment + P.kinetic + P.cross + P.potential + P.history;
  const Real printed = -4 * t * t * params.lambda * N / (N + 2.0) * integrate(g, rho.pow(2.0 / N + 1.0));
  P.total_printed_sign = P.moment + P.kinetic + P.cross + printed + P.history;
  return P;
}

PseudoConformal pseudo_conformal(const Trajectory& traj, std::size_t i) {
  if (i >= traj.size()) throw Error(ErrorCode::IndexOutOfRange, "snapshot index out of range");
  return pseudo_conformal(traj.snapshots[i], traj.h.at(i), traj.params);
}

Real virial_S(const Field& f) {
  const Grid& g = f.grid();
  RArray x2 = RArray::Zero(g.size());
  for (int d = 0; d < g.dims(); ++d) x2 += g.coord(d).square();
  return integrate(g, x2 * f.density());
}

VirialReport virial_consistency(const Trajectory& traj) {
  if (traj.size() < 3) throw Error(ErrorCode::InsufficientData, "virial consistency needs at least 3 snapshots");
  std::vector<Real> S;
  for (const auto& f : traj.snapshots) S.push_back(virial_S(f));
  VirialReport rep;
  Real scale = 0;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const Real dt = traj.snapshots[i + 1].time() - traj.snapshots[i - 1].time();
    rep.times.push_back(traj.snapshots[i].time());
    rep.finite_difference.push_back((S[i + 1] - S[i - 1]) / dt);
    rep.analytic.push_back(2 * morawetz_11(traj.snapshots[i], WeightFn::quadratic()));
    rep.max_abs_mismatch = std::max(rep.max_abs_mismatch, std::abs(rep.finite_difference.back() - rep.analytic.back()));
    scale = std::max(scale, std::abs(rep.analytic.back()));
  }
  rep.max_rel_mismatch = scale > 0 ? rep.max_abs_mismatch / scale : (rep.max_abs_mismatch > 0 ? kInf : 0.0);
  return rep;
}

Real trapezoid(const std::vector<Real>& t, const std::vector<Real>& y) {
  if (t.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "trapezoid: size mismatch");
  Real s = 0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

MorawetzEstimate morawetz_estimate_check(const Trajectory& traj) {
  const Params& p = traj.params;
  if (p.dims != 1) throw Error(ErrorCode::HypothesisViolation, "Morawetz estimate requires N = 1");
  if (p.eta < 1 || p.eta >= 2) throw Error(ErrorCode::HypothesisViolation, "Morawetz estimate requires 1 <= eta < 2");
  MorawetzEstimate m;
  std::vector<Real> t;
  std::vector<Real> w;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Field& f = traj.snapshots[i];
    t.push_back(f.time());
    w.push_back(f.time() * potential_integral(f, p.eta));
    const Real P = pseudo_conformal(traj, i).total;
    m.rhs = i == 0 ? P : std::max(m.rhs, P);
    if (i == 0) m.p_start = P;
    m.p_end = P;
  }
  m.lhs = trapezoid(t, w);
  m.ratio = m.rhs == 0 ? (m.lhs == 0 ? 0.0 : kInf) : m.lhs / m.rhs;
  m.coeff_4m4eta = 2 * p.lambda * (4.0 - 4.0 * p.eta) / (p.eta + 1.0);
  m.coeff_4m2eta = 2 * p.lambda * (4.0 - 2.0 * p.eta) / (p.eta + 1.0);
  m.bound_4m4eta = m.coeff_4m4eta > 0 ? 1 / m.coeff_4m4eta : kInf;
  m.bound_4m2eta = m.coeff_4m2eta > 0 ? 1 / m.coeff_4m2eta : kInf;
  const Real dp = m.p_end - m.p_start;
  const Real den = std::max(std::abs(dp), 1e-300);
  m.identity_residual = std::abs(dp - m.coeff_4m2eta * m.lhs) / den;
  return m;
}

DecayFit decay_fit(const Trajectory& traj, Real t_min, Real t_max) {
  const Params& p = traj.params;
  if (p.dims != 1 || p.eta < 1 || p.eta >= 2)
    throw Error(ErrorCode::HypothesisViolation, "decay fit requires N = 1 and 1 <= eta < 2");
  std::vector<Real> lx;
  std::vector<Real> ly;
  const Real pexp = 2.0 * p.eta + 2.0;
  for (const auto& f : traj.snapshots) {
    const Real t = f.time();
    if (t <= 0 || t < t_min || t > t_max) continue;
    const Real n = lp_norm(f, pexp);
    if (!(n > 0)) continue;
    lx.push_back(std::log(t));
    ly.push_back(std::log(n));
  }
  if (lx.size() < 5) throw Error(ErrorCode::InsufficientData, "decay fit needs at least 5 snapshots with t > 0");
  const Real n = static_cast<Real>(lx.size());
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  Real sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0) throw Error(ErrorCode::InsufficientData, "decay fit needs distinct times");
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  fit.target = -1.0 / pexp;
  fit.samples = lx.size();
  fit.decaying = fit.exponent <= fit.target / 2;
  return fit;
}

namespace {

Real frac_norm2(const Grid& g, const RArray& rho) {
  const int N = g.dims();
  const CArray v = fractional_laplacian(g, rho.cast<Complex>(), (3.0 - N) / 4.0);
  return integrate(g, v.abs2());
}

}  // namespace

StabilityReport stability_check(const Trajectory& traj, const StabilityOptions& opts) {
  const Params& p = traj.params;
  const Grid& g = traj.grid();
  const int N = g.dims();
  const Constants C = Constants::for_dims(N);
  StabilityReport rep;
  rep.trivial = N == 1;
  PairConvolver conv(g, opts.diagonal);
  std::vector<Real> t;
  std::vector<Real> inter;
  for (const auto& f : traj.snapshots) {
    t.push_back(f.time());
    const RArray rho = f.density();
    rep.sup_inner = std::max(rep.sup_inner, conv.pair_action(current(f)).abs().maxCoeff());
    if (N > 1) {
      rep.frac_per_snapshot.push_back(frac_norm2(g, rho));
      const RArray U = conv.inverse_distance(rho);
      inter.push_back(integrate(g, abs_pow_2eta(rho, p.eta) * rho * U));
    }
  }
  const Field& f0 = traj.snapshots.front();
  const Real m0 = mass(f0);
  const Real e0 = energy(f0, p);
  rep.rhs = m0 * rep.sup_inner;
  rep.cs_bound = e0 >= 0 ? std::sqrt(m0) * std::sqrt(2 * e0) : std::numeric_limits<Real>::quiet_NaN();
  rep.cs_satisfied = e0 >= 0 && rep.sup_inner <= rep.cs_bound * (1 + opts.tol);
  if (N > 1) {
    const Real frac = trapezoid(t, rep.frac_per_snapshot);
    rep.lhs_frac = C.C_N_pi * (N - 1) / 2.0 * frac;
    rep.lhs_frac_riesz = C.riesz * (N - 1) / 2.0 * frac;
    rep.lhs_interaction = p.lambda * p.eta * (N - 1) / (p.eta + 1.0) * trapezoid(t, inter);
  }
  const Real bound = rep.rhs * (1 + opts.tol);
  rep.satisfied = rep.lhs_frac + rep.lhs_interaction <= bound;
  rep.satisfied_riesz = rep.lhs_frac_riesz + rep.lhs_interaction <= bound;
  return rep;
}

SharpenedReport sharpened_bound_check(const Trajectory& traj, Real C) {
  const Params& p = traj.params;
  const Grid& g = traj.grid();
  const Field& f0 = traj.snapshots.front();
  SharpenedReport rep;
  rep.mass0 = mass(f0);
  rep.energy0 = energy(f0, p);
  if (rep.energy0 < 0) throw Error(ErrorCode::NegativeEnergy, "sharpened bound requires nonnegative energy");
  std::vector<Real> t;
  std::vector<Real> frac;
  for (const auto& f : traj.snapshots) {
    t.push_back(f.time());
    frac.push_back(frac_norm2(g, f.density()));
  }
  rep.lhs = std::sqrt(std::max(0.0, trapezoid(t, frac)));
  const Real base = std::pow(rep.mass0, 0.75) * std::sqrt(rep.energy0);
  const Real base_bal = std::pow(rep.mass0, 0.75) * std::pow(rep.energy0, 0.25);
  rep.rhs = C * base;
  rep.rhs_balanced = C * base_bal;
  rep.ratio = base > 0 ? rep.lhs / base : 0.0;
  rep.ratio_balanced = base_bal > 0 ? rep.lhs / base_bal : 0.0;
  rep.satisfied = rep.lhs <= rep.rhs;
  rep.satisfied_balanced = rep.lhs <= rep.rhs_balanced;
  return rep;
}

HessianCheck hessian_pd_check(const Point& x, const Point& y, const Point& v) {
  if (x.size() != y.size() || x.size() != v.size()) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  const Point z = x - y;
  const Real r = z.norm();
  if (r == 0) throw Error(ErrorCode::CoincidentPoints, "x and y coincide");
  HessianCheck c;
  const Real zv = z.dot(v);
  c.closed_form = (v.squaredNorm() - zv * zv / (r * r)) / r;

  const int N = static_cast<int>(z.size());
  const Real h = 2e-4 * r;
  Eigen::MatrixXd H(N, N);
  for (int m = 0; m < N; ++m) {
    for (int n = 0; n < N; ++n) {
      Point em = Point::Zero(N), en = Point::Zero(N);
      em[m] = h;
      en[n] = h;
      H(m, n) = ((z + em + en).norm() - (z + em - en).norm() - (z - em + en).norm() + (z - em - en).norm()) / (4 * h * h);
    }
  }
  c.finite_difference = v.dot(H * v);
  return c;
}

RieszCheck riesz_identity_check(const Field& f, Diagonal diagonal) {
  const Grid& g = f.grid();
  const int N = g.dims();
  if (N < 2) throw Error(ErrorCode::HypothesisViolation, "Riesz identity needs N >= 2");
  const RArray rho = f.density();
  PairConvolver conv(g, diagonal);
  const RArray U = conv.inverse_distance(rho);
  const RArray mlap = -laplacian(g, rho.cast<Complex>()).real();
  RieszCheck c;
  c.direct = (N - 1) / 2.0 * integrate(g, U * mlap);
  c.spectral = Constants::for_dims(N).riesz * (N - 1) / 2.0 * frac_norm2(g, rho);
  c.rel_error = c.spectral != 0 ? std::abs(c.direct - c.spectral) / std::abs(c.spectral) : std::abs(c.direct);
  return c;
}

}  // namespace nls
