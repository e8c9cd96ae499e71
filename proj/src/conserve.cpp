#include "nls/conserve.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "nls/nonlin.hpp"

namespace nls {

namespace {

RArray d_real(const Grid& g, const RArray& f, int d) { return partial(g, f.cast<Complex>(), d).real(); }

void check_interior(const Trajectory& traj, std::size_t i) {
  if (i == 0 || i + 1 >= traj.size())
    throw Error(ErrorCode::IndexOutOfRange, "local residual needs an interior snapshot index");
}

}  // namespace

Real mass(const Field& f) { return integrate(f.grid(), f.density()); }

Real kinetic_energy(const Field& f) {
  const Grid& g = f.grid();
  const CArray fhat = g.forward(f.values());
  return 0.5 * parseval_weight(g) * (g.xi2() * fhat.abs2()).sum();
}

Real potential_integral(const Field& f, int eta) {
  const RArray rho = f.density();
  return integrate(f.grid(), abs_pow_2eta(rho, eta) * rho);
}

Real energy(const Field& f, const Params& params) {
  return kinetic_energy(f) + params.lambda / (2.0 * params.eta + 2.0) * potential_integral(f, params.eta);
}

std::vector<RArray> current(const Field& f) {
  std::vector<RArray> q;
  const CArray conj = f.values().conjugate();
  for (const auto& g : gradient(f.grid(), f.values())) q.push_back((conj * g).imag());
  return q;
}

Eigen::VectorXd momentum(const Field& f) {
  const auto q = current(f);
  Eigen::VectorXd m(f.dims());
  for (int d = 0; d < f.dims(); ++d) m[d] = integrate(f.grid(), q[d]);
  return m;
}

RArray lagrangian_density(const Field& f, const Params& params) {
  const Grid& g = f.grid();
  const RArray rho = f.density();
  const RArray lap = laplacian(g, rho.cast<Complex>()).real();
  const Real c = params.lambda * params.eta / (params.eta + 1.0);
  return -0.5 * lap + c * abs_pow_2eta(rho, params.eta) * rho;
}

RArray symmetric_tensor(const Field& f, int m, int n) {
  if (m < 0 || n < 0 || m >= f.dims() || n >= f.dims())
    throw Error(ErrorCode::IndexOutOfRange, "tensor index out of range");
  const CArray dm = partial(f.grid(), f.values(), m);
  if (m == n) return 2.0 * dm.abs2();
  const CArray dn = partial(f.grid(), f.values(), n);
  return 2.0 * (dm * dn.conjugate()).real();
}

RArray local_mass_residual(const Trajectory& traj, std::size_t i) {
  check_interior(traj, i);
  const Field& a = traj.snapshots[i - 1];
  const Field& b = traj.snapshots[i + 1];
  const Field& f = traj.snapshots[i];
  const RArray dt_rho = (b.density() - a.density()) / (b.time() - a.time());
  const auto q = current(f);
  std::vector<CArray> qc;
  for (const auto& c : q) qc.push_back(c.cast<Complex>());
  return dt_rho + 2.0 * divergence(f.grid(), qc).real();
}

RArray local_momentum_residual(const Trajectory& traj, std::size_t i, int m) {
  check_interior(traj, i);
  const Field& f = traj.snapshots[i];
  if (m < 0 || m >= f.dims()) throw Error(ErrorCode::IndexOutOfRange, "momentum component out of range");
  const Field& a = traj.snapshots[i - 1];
  const Field& b = traj.snapshots[i + 1];
  const Grid& g = f.grid();
  const RArray dt_q = (current(b)[m] - current(a)[m]) / (b.time() - a.time());
  RArray flux = d_real(g, lagrangian_density(f, traj.params), m);
  for (int n = 0; n < f.dims(); ++n) flux += d_real(g, symmetric_tensor(f, m, n), n);
  return dt_q + flux;
}

Real l2_norm(const Grid& grid, const RArray& f) { return std::sqrt(integrate(grid, f.square())); }

DiagnosticsRecord diagnostics(const Field& f, const Params& params, Real tail_shell) {
  DiagnosticsRecord r;
  r.time = f.time();
  r.mass = mass(f);
  r.energy = energy(f, params);
  r.momentum = momentum(f);
  r.hq_norm = sobolev_norm(f, params.q);
  r.linf_norm = lp_norm(f, kInf);
  r.tail_mass = tail_mass(f, tail_shell);
  return r;
}

std::vector<DiagnosticsRecord> diagnostics(const Trajectory& traj, bool local_residuals) {
  std::vector<DiagnosticsRecord> rows;
  rows.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    DiagnosticsRecord r = diagnostics(traj.snapshots[i], traj.params, traj.cfg.tail_shell);
    if (local_residuals && i > 0 && i + 1 < traj.size()) {
      const Grid& g = traj.grid();
      r.mass_residual = l2_norm(g, local_mass_residual(traj, i));
      std::vector<Real> mom;
      for (int m = 0; m < g.dims(); ++m) mom.push_back(l2_norm(g, local_momentum_residual(traj, i, m)));
      r.momentum_residual = mom;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

std::string g17(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& rows, int dims,
                           bool local_residuals) {
  static const char* axes[] = {"x", "y", "z"};
  out << "t,mass,energy";
  for (int d = 0; d < dims; ++d) out << ",p" << axes[d];
  out << ",hq,linf,tail";
  if (local_residuals) {
    out << ",res_mass";
    for (int d = 0; d < dims; ++d) out << ",res_mom_" << axes[d];
  }
  out << "\n";
  for (const auto& r : rows) {
    out << g17(r.time) << ',' << g17(r.mass) << ',' << g17(r.energy);
    for (int d = 0; d < dims; ++d) out << ',' << g17(r.momentum[d]);
    out << ',' << g17(r.hq_norm) << ',' << g17(r.linf_norm) << ',' << g17(r.tail_mass);
    if (local_residuals) {
      out << ',' << (r.mass_residual ? g17(*r.mass_residual) : "");
      for (int d = 0; d < dims; ++d) out << ',' << (r.momentum_residual ? g17((*r.momentum_residual)[d]) : "");
    }
    out << "\n";
  }
}

DriftSummary drifts(const std::vector<DiagnosticsRecord>& rows) {
  DriftSummary s;
  if (rows.empty()) return s;
  const auto& r0 = rows.front();
  for (const auto& r : rows) {
    if (r0.mass != 0) s.mass_rel = std::max(s.mass_rel, std::abs(r.mass - r0.mass) / r0.mass);
    const Real escale = r0.energy != 0 ? std::abs(r0.energy) : 1.0;
    s.energy_rel = std::max(s.energy_rel, std::abs(r.energy - r0.energy) / escale);
    s.momentum_abs = std::max(s.momentum_abs, (r.momentum - r0.momentum).norm());
  }
  return s;
}

}  // namespace nls
