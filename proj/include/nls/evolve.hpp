#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nls/field.hpp"

namespace nls {

enum class Method { SplitStep, Picard };

struct StepperConfig {
  Method method = Method::SplitStep;
  Real dt = 1e-3;
  Real t_final = 1;
  int picard_iters = 50;
  Real picard_tol = 1e-12;
  int quadrature_nodes = 11;
  Real blowup_threshold = kInf;
  Real tail_tol = 1e-3;
  Real tail_shell = 0.1;  // outer fraction of each half-extent
  int snapshot_every = 0; // 0: ceil(steps / 200)

  void validate() const;
};

enum class Status { Completed, BlowUpDetected, TailMassViolation, PicardDiverged };

const char* to_string(Status s);
Status status_from_string(const std::string& s);
const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct Trajectory {
  Params params;
  StepperConfig cfg;
  std::vector<Field> snapshots;
  std::vector<RArray> h;  // integral of s |psi(x, s)|^2 ds from 0 to t, per snapshot
  Status status = Status::Completed;
  Real status_time = 0;
  std::vector<std::pair<Real, Real>> hq_history;  // last 10 (t, ||psi||_{H^q})

  std::size_t size() const { return snapshots.size(); }
  const Field& back() const { return snapshots.back(); }
  std::vector<Real> times() const;
  const Grid& grid() const { return snapshots.front().grid(); }
};

// Fraction of the mass lying in the outer shell of the box.
Real tail_mass(const Field& f, Real shell = 0.1);

CArray free_propagator(const Grid& grid, const CArray& f, Real t);
Field free_propagator(const Field& f, Real t);

// Strang step N_{dt/2} Q(dt) N_{dt/2}, with a precomputed propagator.
class SplitStepper {
 public:
  SplitStepper(GridPtr grid, const Params& params, Real dt);
  void step(CArray& psi) const;
  Real dt() const { return dt_; }

 private:
  void half_nonlinear(CArray& psi) const;

  GridPtr grid_;
  Real lambda_;
  int eta_;
  Real dt_;
  CArray propagator_;
};

Field splitstep_step(const Field& f, Real dt, const Params& params);

struct PicardReport {
  Field result;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  std::vector<Real> distances;            // sup over nodes of ||psi^{k+1} - psi^k||_{H^q}
  std::vector<Real> contraction_factors;  // distances[k+1] / distances[k]
};

PicardReport picard_solve(const Field& psi0, Real T, const StepperConfig& cfg, const Params& params);

// Marches from psi0.time() to cfg.t_final. h0 is the accumulated history at psi0.time() (zero if empty).
Trajectory evolve(const Field& psi0, const StepperConfig& cfg, const Params& params, const RArray& h0 = RArray());

// Continues from the last snapshot of prev to cfg.t_final.
Trajectory evolve_from(const Trajectory& prev, const StepperConfig& cfg);

// Unit H^q-norm Gaussian centred in the box.
Field unit_bump(const GridPtr& grid, Real q, Real width = 1);

struct ContinuousDependenceReport {
  std::vector<Real> eps;
  std::vector<Real> times;
  std::vector<std::vector<Real>> error;  // error[k][i] = ||psi - psi_eps_k||_{H^q} at times[i]
  std::vector<Real> fitted_rate;         // smallest C with e(t) <= eps e^{C t}
  std::vector<Status> status;

  // max_i |e_a/eps_a - e_b/eps_b| / (e_b/eps_b) over times <= t_max.
  Real curve_disagreement(std::size_t a, std::size_t b, Real t_max) const;
};

ContinuousDependenceReport continuous_dependence_experiment(const Field& psi0, const std::vector<Real>& eps, Real T,
                                                            StepperConfig cfg, const Params& params);

}  // namespace nls
