#include "nls/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "nls/nonlin.hpp"
#include "nls/parallel.hpp"

namespace nls {

void StepperConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (!(t_final > 0) || !std::isfinite(t_final)) throw Error(ErrorCode::InvalidArgument, "t_final must be positive");
  if (dt > t_final) throw Error(ErrorCode::InvalidArgument, "dt must not exceed t_final");
  if (picard_iters < 1) throw Error(ErrorCode::InvalidArgument, "picard_iters must be >= 1");
  if (!(picard_tol > 0)) throw Error(ErrorCode::InvalidArgument, "picard_tol must be positive");
  if (quadrature_nodes < 2) throw Error(ErrorCode::InvalidArgument, "quadrature_nodes must be >= 2");
  if (!(tail_shell > 0 && tail_shell < 1)) throw Error(ErrorCode::InvalidArgument, "tail_shell must lie in (0, 1)");
  if (snapshot_every < 0) throw Error(ErrorCode::InvalidArgument, "snapshot_every must be >= 0");
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Completed: return "Completed";
    case Status::BlowUpDetected: return "BlowUpDetected";
    case Status::TailMassViolation: return "TailMassViolation";
    case Status::PicardDiverged: return "PicardDiverged";
  }
  return "Unknown";
}

Status status_from_string(const std::string& s) {
  for (Status st : {Status::Completed, Status::BlowUpDetected, Status::TailMassViolation, Status::PicardDiverged})
    if (s == to_string(st)) return st;
  throw Error(ErrorCode::Io, "unknown status '" + s + "'");
}

const char* to_string(Method m) { return m == Method::SplitStep ? "splitstep" : "picard"; }

Method method_from_string(const std::string& s) {
  if (s == "splitstep" || s == "SplitStep") return Method::SplitStep;
  if (s == "picard" || s == "Picard") return Method::Picard;
  throw Error(ErrorCode::Config, "unknown method '" + s + "'");
}

std::vector<Real> Trajectory::times() const {
  std::vector<Real> t;
  t.reserve(snapshots.size());
  for (const auto& s : snapshots) t.push_back(s.time());
  return t;
}

Real tail_mass(const Field& f, Real shell) {
  const Grid& g = f.grid();
  const RArray rho = f.density();
  Real outer = 0;
  Real total = 0;
  for (Index p = 0; p < g.size(); ++p) {
    bool in_shell = false;
    for (int d = 0; d < g.dims(); ++d) {
      if (std::abs(g.coord(d)[p]) > (1 - shell) * g.extent(d) / 2) {
        in_shell = true;
        break;
      }
    }
    total += rho[p];
    if (in_shell) outer += rho[p];
  }
  return total > 0 ? outer / total : 0.0;
}

namespace {

CArray phase(const RArray& xi2, Real t) {
  CArray out(xi2.size());
  for (Index p = 0; p < xi2.size(); ++p) out[p] = std::polar(1.0, -t * xi2[p]);
  return out;
}

}  // namespace

CArray free_propagator(const Grid& grid, const CArray& f, Real t) {
  if (t == 0) return f;
  return grid.inverse(grid.forward(f) * phase(grid.xi2(), t));
}

Field free_propagator(const Field& f, Real t) {
  return Field(f.grid_ptr(), free_propagator(f.grid(), f.values(), t), f.time() + t);
}

SplitStepper::SplitStepper(GridPtr grid, const Params& params, Real dt)
    : grid_(std::move(grid)), lambda_(params.lambda), eta_(params.eta), dt_(dt) {
  propagator_ = phase(grid_->xi2(), dt);
}

void SplitStepper::half_nonlinear(CArray& psi) const {
  if (lambda_ == 0) return;
  const Real tau = 0.5 * dt_ * lambda_;
  for (Index p = 0; p < psi.size(); ++p) {
    psi[p] *= std::polar(1.0, -tau * abs_pow_2eta(std::norm(psi[p]), eta_));
  }
}

void SplitStepper::step(CArray& psi) const {
  half_nonlinear(psi);
  psi = grid_->inverse(grid_->forward(psi) * propagator_);
  half_nonlinear(psi);
}

Field splitstep_step(const Field& f, Real dt, const Params& params) {
  SplitStepper s(f.grid_ptr(), params, dt);
  CArray psi = f.values();
  s.step(psi);
  return Field(f.grid_ptr(), std::move(psi), f.time() + dt);
}

PicardReport picard_solve(const Field& psi0, Real T, const StepperConfig& cfg, const Params& params) {
  if (!(T > 0)) throw Error(ErrorCode::InvalidArgument, "Picard horizon must be positive");
  const Grid& g = psi0.grid();
  const int m = cfg.quadrature_nodes;
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "quadrature_nodes must be >= 2");
  const Real dnu = T / (m - 1);
  const RArray& xi2 = g.xi2();
  const RArray hq_weight = (1.0 + xi2).pow(params.q) * parseval_weight(g);
  const CArray psi0_hat = g.forward(psi0.values());

  std::vector<Real> nodes(m);
  std::vector<CArray> back(m);  // e^{-i t_j |xi|^2}
  std::vector<CArray> fwd(m);   // e^{+i t_j |xi|^2}
  for (int j = 0; j < m; ++j) {
    nodes[j] = j * dnu;
    back[j] = phase(xi2, nodes[j]);
    fwd[j] = back[j].conjugate();
  }

  std::vector<CArray> cur(m);
  for (int j = 0; j < m; ++j) cur[j] = psi0_hat * back[j];

  PicardReport rep{psi0, 0, false, false, {}, {}};
  int increases = 0;
  for (int k = 0; k < cfg.picard_iters; ++k) {
    std::vector<CArray> next(m);
    CArray integral = CArray::Zero(g.size());
    CArray prev_g;
    Real dist = 0;
    for (int j = 0; j < m; ++j) {
      const CArray psi = g.inverse(cur[j]);
      const CArray gj = fwd[j] * g.forward(nonlinearity(psi, params.lambda, params.eta));
      if (j > 0) integral += (0.5 * dnu) * (prev_g + gj);
      prev_g = gj;
      next[j] = back[j] * (psi0_hat - Complex(0, 1) * integral);
      dist = std::max(dist, std::sqrt((hq_weight * (next[j] - cur[j]).abs2()).sum()));
    }
    cur.swap(next);
    rep.iterations = k + 1;
    if (!rep.distances.empty()) {
      rep.contraction_factors.push_back(rep.distances.back() > 0 ? dist / rep.distances.back() : 0.0);
      increases = dist > rep.distances.back() ? increases + 1 : 0;
    }
    rep.distances.push_back(dist);
    if (!std::isfinite(dist) || increases >= 3) {
      rep.diverged = true;
      break;
    }
    if (dist < cfg.picard_tol) {
      rep.converged = true;
      break;
    }
  }
  CArray out = g.inverse(cur[m - 1]);
  if (rep.diverged && (!out.real().isFinite().all() || !out.imag().isFinite().all())) out = psi0.values();
  rep.result = Field(psi0.grid_ptr(), std::move(out), psi0.time() + T);
  return rep;
}

Field unit_bump(const GridPtr& grid, Real q, Real width) {
  RArray r2 = RArray::Zero(grid->size());
  for (int d = 0; d < grid->dims(); ++d) r2 += grid->coord(d).square();
  const Field raw(grid, (-r2 / (2 * width * width)).exp().cast<Complex>());
  return raw.with_values(raw.values() / sobolev_norm(raw, q));
}

Trajectory evolve(const Field& psi0, const StepperConfig& cfg, const Params& params, const RArray& h0) {
  cfg.validate();
  params.validate();
  if (psi0.dims() != params.dims) throw Error(ErrorCode::InvalidArgument, "field dimension does not match params");
  const GridPtr& grid = psi0.grid_ptr();
  const Real t0 = psi0.time();
  const Real t_end = cfg.t_final;
  if (!(t_end > t0)) throw Error(ErrorCode::InvalidArgument, "t_final must exceed the start time");

  const Real tail0 = tail_mass(psi0, cfg.tail_shell);
  if (tail0 > cfg.tail_tol) {
    std::ostringstream os;
    os << "initial tail mass " << tail0 << " exceeds tail_tol " << cfg.tail_tol;
    throw Error(ErrorCode::HypothesisViolation, os.str());
  }

  const long nsteps = std::max(1L, static_cast<long>(std::ceil((t_end - t0) / cfg.dt - 1e-9)));
  const long every = cfg.snapshot_every > 0 ? cfg.snapshot_every : std::max(1L, (nsteps + 199) / 200);

  Trajectory traj;
  traj.params = params;
  traj.cfg = cfg;
  RArray h = h0.size() == 0 ? RArray(RArray::Zero(grid->size())) : h0;
  if (h.size() != grid->size()) throw Error(ErrorCode::InvalidArgument, "history size does not match grid");

  auto push_hq = [&](Real t, Real v) {
    traj.hq_history.emplace_back(t, v);
    if (traj.hq_history.size() > 10) traj.hq_history.erase(traj.hq_history.begin());
  };

  traj.snapshots.push_back(psi0);
  traj.h.push_back(h);
  push_hq(t0, sobolev_norm(psi0, params.q));

  const bool monitor_hq = std::isfinite(cfg.blowup_threshold);
  std::optional<SplitStepper> stepper;
  std::optional<SplitStepper> last_stepper;
  if (cfg.method == Method::SplitStep) stepper.emplace(grid, params, cfg.dt);

  CArray psi = psi0.values();
  RArray rho_prev = psi.abs2();
  Real t_prev = t0;
  for (long n = 1; n <= nsteps; ++n) {
    const Real t_n = n == nsteps ? t_end : t0 + static_cast<Real>(n) * cfg.dt;
    const Real tau = t_n - t_prev;
    if (cfg.method == Method::SplitStep) {
      if (n == nsteps && tau != cfg.dt) {
        last_stepper.emplace(grid, params, tau);
        last_stepper->step(psi);
      } else {
        stepper->step(psi);
      }
    } else {
      PicardReport rep = picard_solve(Field(grid, psi, t_prev), tau, cfg, params);
      if (rep.diverged) {
        traj.status = Status::PicardDiverged;
        traj.status_time = t_n;
        return traj;
      }
      psi = rep.result.values();
    }

    const bool finite = psi.real().isFinite().all() && psi.imag().isFinite().all();
    if (!finite) {
      traj.status = Status::BlowUpDetected;
      traj.status_time = t_n;
      push_hq(t_n, kInf);
      return traj;
    }
    const RArray rho = psi.abs2();
    h += (0.5 * tau) * (t_prev * rho_prev + t_n * rho);
    rho_prev = rho;
    t_prev = t_n;

    const bool snap = (n % every == 0) || n == nsteps;
    Field current(grid, psi, t_n);
    if (monitor_hq || snap) {
      const Real hq = sobolev_norm(current, params.q);
      push_hq(t_n, hq);
      if (monitor_hq && !(hq <= cfg.blowup_threshold)) {
        traj.snapshots.push_back(std::move(current));
        traj.h.push_back(h);
        traj.status = Status::BlowUpDetected;
        traj.status_time = t_n;
        return traj;
      }
    }
    if (tail_mass(current, cfg.tail_shell) > cfg.tail_tol) {
      traj.snapshots.push_back(std::move(current));
      traj.h.push_back(h);
      traj.status = Status::TailMassViolation;
      traj.status_time = t_n;
      return traj;
    }
    if (snap) {
      traj.snapshots.push_back(std::move(current));
      traj.h.push_back(h);
    }
  }
  traj.status = Status::Completed;
  traj.status_time = t_end;
  return traj;
}

Trajectory evolve_from(const Trajectory& prev, const StepperConfig& cfg) {
  if (prev.snapshots.empty()) throw Error(ErrorCode::InvalidArgument, "cannot restart from an empty trajectory");
  if (prev.status != Status::Completed)
    throw Error(ErrorCode::InvalidArgument, std::string("cannot restart a trajectory with status ") + to_string(prev.status));
  return evolve(prev.snapshots.back(), cfg, prev.params, prev.h.back());
}

Real ContinuousDependenceReport::curve_disagreement(std::size_t a, std::size_t b, Real t_max) const {
  Real worst = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > t_max + 1e-12) break;
    const Real ra = error.at(a)[i] / eps.at(a);
    const Real rb = error.at(b)[i] / eps.at(b);
    if (rb == 0) {
      if (ra != 0) worst = kInf;
      continue;
    }
    worst = std::max(worst, std::abs(ra - rb) / rb);
  }
  return worst;
}

ContinuousDependenceReport continuous_dependence_experiment(const Field& psi0, const std::vector<Real>& eps, Real T,
                                                            StepperConfig cfg, const Params& params) {
  cfg.t_final = psi0.time() + T;
  const Field bump = unit_bump(psi0.grid_ptr(), params.q);
  std::vector<std::optional<Trajectory>> runs(eps.size() + 1);
  parallel_for(eps.size() + 1, [&](std::size_t k) {
    const Field start = k == 0 ? psi0 : psi0.with_values(psi0.values() + eps[k - 1] * bump.values());
    runs[k] = evolve(start, cfg, params);
  });

  ContinuousDependenceReport rep;
  rep.eps = eps;
  const Trajectory& base = *runs[0];
  if (base.status != Status::Completed)
    throw Error(ErrorCode::HypothesisViolation, std::string("background run ended with ") + to_string(base.status));
  rep.times = base.times();
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const Trajectory& run = *runs[k + 1];
    rep.status.push_back(run.status);
    if (run.status != Status::Completed)
      throw Error(ErrorCode::HypothesisViolation, std::string("perturbed run ended with ") + to_string(run.status));
    std::vector<Real> e;
    Real rate = -kInf;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const Field diff = base.snapshots[i].with_values(run.snapshots[i].values() - base.snapshots[i].values());
      e.push_back(sobolev_norm(diff, params.q));
      const Real t = rep.times[i] - psi0.time();
      if (t > 0 && eps[k] > 0 && e.back() > 0) rate = std::max(rate, std::log(e.back() / eps[k]) / t);
    }
    rep.error.push_back(std::move(e));
    rep.fitted_rate.push_back(eps[k] > 0 ? rate : 0.0);
  }
  return rep;
}

}  // namespace nls
