#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nls/evolve.hpp"
#include "nls/pair_kernels.hpp"

namespace nls {

enum class WeightKind { QuadraticAbsX, PairDistance, RadialBump };

// Weight delta with closed-form derivatives. PairDistance is evaluated at z = x - y.
struct WeightFn {
  WeightKind kind = WeightKind::QuadraticAbsX;
  Real radius = 1;  // RadialBump scale R: phi(|x|/R)

  static WeightFn quadratic() { return {WeightKind::QuadraticAbsX, 1}; }
  static WeightFn pair_distance() { return {WeightKind::PairDistance, 1}; }
  static WeightFn radial_bump(Real R) { return {WeightKind::RadialBump, R}; }

  Real value(const Point& z) const;
  Point gradient(const Point& z) const;
  Real laplacian(const Point& z) const;
  Eigen::MatrixXd hessian(const Point& z) const;
  // d_{x_m} d_{y_n} delta(x - y) (PairDistance).
  Eigen::MatrixXd mixed_hessian(const Point& x, const Point& y) const { return -hessian(x - y); }
};

// Smooth monotone profile: 1 on [0, 1], 0 on [2, inf).
Real bump_profile(Real u, int derivative = 0);

struct Constants {
  int dims = 3;
  Real C_N_pi = 0;  // 4 pi^{3/2} Gamma(1/2) / Gamma((N-1)/2); 0 for N = 1
  Real riesz = 0;   // c_N with FT(1/|x|) = c_N |xi|^{1-N}; inf for N = 1

  static Constants for_dims(int dims);
};

Real morawetz_11(const Field& f, const WeightFn& w);
// Direct O(M^2) pair sum, deterministic in any thread count.
Real morawetz_22_direct(const Field& f);
Real morawetz_22_fft(const Field& f);
Real morawetz_22(const Field& f);

struct PseudoConformal {
  Real t = 0;
  Real moment = 0;     // int |x|^2 |psi|^2
  Real kinetic = 0;    // 4 t^2 int |grad psi|^2
  Real cross = 0;      // -4 t int x . Q
  Real potential = 0;  // 4 t^2 lambda/(eta+1) int |psi|^{2 eta + 2}
  Real history = 0;    // -2 N int Laplacian(H)
  Real total = 0;
  Real total_printed_sign = 0;  // potential term -4 t^2 lambda N/(N+2) int |psi|^{4/N + 2}
};

PseudoConformal pseudo_conformal(const Field& f, const RArray& h, const Params& params);
PseudoConformal pseudo_conformal(const Trajectory& traj, std::size_t i);

Real virial_S(const Field& f);

struct VirialReport {
  std::vector<Real> times;
  std::vector<Real> finite_difference;
  std::vector<Real> analytic;  // 2 * morawetz_11(QuadraticAbsX)
  Real max_abs_mismatch = 0;
  Real max_rel_mismatch = 0;  // relative to max |analytic|
};

VirialReport virial_consistency(const Trajectory& traj);

struct MorawetzEstimate {
  Real lhs = 0;  // int t int |psi|^{2 eta + 2} dx dt
  Real rhs = 0;  // sup_t P(t)
  Real ratio = 0;
  Real coeff_4m4eta = 0;  // 2 lambda (4 - 4 eta)/(eta + 1)
  Real coeff_4m2eta = 0;  // 2 lambda (4 - 2 eta)/(eta + 1)
  Real bound_4m4eta = 0;  // 1/coeff if positive, inf otherwise
  Real bound_4m2eta = 0;
  Real p_start = 0;
  Real p_end = 0;
  Real identity_residual = 0;  // |(P_end - P_start) - coeff_4m2eta * lhs| / max(|P_end - P_start|, tiny)
};

MorawetzEstimate morawetz_estimate_check(const Trajectory& traj);

struct DecayFit {
  Real exponent = 0;
  Real prefactor = 0;
  Real target = 0;  // -1/(2 eta + 2)
  std::size_t samples = 0;
  bool decaying = false;
};

DecayFit decay_fit(const Trajectory& traj, Real t_min = 0, Real t_max = kInf);

struct StabilityOptions {
  Real tol = 1e-6;
  Diagonal diagonal = Diagonal::Zero;
};

struct StabilityReport {
  Real lhs_frac = 0;        // with C_N_pi
  Real lhs_frac_riesz = 0;  // with the Riesz constant c_N
  Real lhs_interaction = 0;
  Real rhs = 0;
  Real sup_inner = 0;  // sup_{t,y} |int grad_x |x - y| . Q dx|
  Real cs_bound = 0;   // sqrt(M0) sqrt(2 E0)
  bool satisfied = false;
  bool satisfied_riesz = false;
  bool trivial = false;  // N = 1
  bool cs_satisfied = false;
  std::vector<Real> frac_per_snapshot;  // ||(-Laplacian)^{(3-N)/4} |psi|^2||^2
};

StabilityReport stability_check(const Trajectory& traj, const StabilityOptions& opts = {});

struct SharpenedReport {
  Real lhs = 0;  // ||(-Laplacian)^{(3-N)/4}|psi|^2||_{L^2_t L^2_x}
  Real mass0 = 0;
  Real energy0 = 0;
  Real rhs = 0;           // C M0^{3/4} E0^{1/2}
  Real rhs_balanced = 0;  // C M0^{3/4} E0^{1/4}
  Real ratio = 0;         // lhs / (M0^{3/4} E0^{1/2})
  Real ratio_balanced = 0;
  bool satisfied = false;
  bool satisfied_balanced = false;
};

SharpenedReport sharpened_bound_check(const Trajectory& traj, Real C = 1);

struct HessianCheck {
  Real closed_form = 0;
  Real finite_difference = 0;
};

HessianCheck hessian_pd_check(const Point& x, const Point& y, const Point& v);

struct RieszCheck {
  Real direct = 0;    // (N-1)/2 int U (-Laplacian rho), U = rho * 1/|z|
  Real spectral = 0;  // c_N (N-1)/2 ||(-Laplacian)^{(3-N)/4} rho||^2
  Real rel_error = 0;
};

RieszCheck riesz_identity_check(const Field& f, Diagonal diagonal = Diagonal::CellAverage);

// Trapezoid rule over (t_i, y_i).
Real trapezoid(const std::vector<Real>& t, const std::vector<Real>& y);

}  // namespace nls
