#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nls/evolve.hpp"

namespace nls {

Real mass(const Field& f);
Real kinetic_energy(const Field& f);  // (1/2) int |grad psi|^2
Real potential_integral(const Field& f, int eta);  // int |psi|^{2 eta + 2}
Real energy(const Field& f, const Params& params);
Eigen::VectorXd momentum(const Field& f);

// Q_m = Im(conj(psi) d_m psi)
std::vector<RArray> current(const Field& f);

// -1/2 Laplacian(|psi|^2) + lambda eta/(eta+1) |psi|^{2 eta + 2}
RArray lagrangian_density(const Field& f, const Params& params);
// 2 Re(d_m psi conj(d_n psi)); m, n are 0-based
RArray symmetric_tensor(const Field& f, int m, int n);

// d_t |psi|^2 + 2 div Q at interior snapshot i (central difference in time).
RArray local_mass_residual(const Trajectory& traj, std::size_t i);
// d_t Q_m + sum_n d_n(delta_mn L + S_mn) at interior snapshot i.
RArray local_momentum_residual(const Trajectory& traj, std::size_t i, int m);

Real l2_norm(const Grid& grid, const RArray& f);

struct DiagnosticsRecord {
  Real time = 0;
  Real mass = 0;
  Real energy = 0;
  Eigen::VectorXd momentum;
  Real hq_norm = 0;
  Real linf_norm = 0;
  Real tail_mass = 0;
  std::optional<Real> mass_residual;
  std::optional<std::vector<Real>> momentum_residual;
};

DiagnosticsRecord diagnostics(const Field& f, const Params& params, Real tail_shell = 0.1);
// One record per snapshot; residuals filled at interior snapshots when requested.
std::vector<DiagnosticsRecord> diagnostics(const Trajectory& traj, bool local_residuals);

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& rows, int dims, bool local_residuals);

struct DriftSummary {
  Real mass_rel = 0;
  Real energy_rel = 0;
  Real momentum_abs = 0;
};

DriftSummary drifts(const std::vector<DiagnosticsRecord>& rows);

}  // namespace nls
