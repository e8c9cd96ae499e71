#include <gtest/gtest.h>

#include "nls/conserve.hpp"
#include "nls/evolve.hpp"
#include "oracles.hpp"

using namespace nls;
using oracle::kPi;

namespace {

const Params kSoliton{-2, 1, 1, 1};

Field plane_wave(const GridPtr& g, Real a, Real k) {
  return Field(g, oracle::sample(g, [&](const std::vector<Real>& x) { return a * std::polar(1.0, k * x[0]); }));
}

}  // namespace

TEST(Evolve, FreePropagatorBasics) {
  std::mt19937_64 rng(1);
  const GridPtr g = Grid::make({6.0, 8.0}, {16, 32});
  const Field f(g, oracle::random_bandlimited(*g, rng));
  EXPECT_LT(oracle::max_abs(free_propagator(f, 0).values() - f.values()), 1e-14);
  for (Real t : {0.1, 3.0, -2.0}) EXPECT_NEAR(lp_norm(free_propagator(f, t), 2), lp_norm(f, 2), 1e-13);
  const GridPtr h = Grid::cube(1, 2 * kPi, 32);
  const Real t = 0.37;
  const Field e = plane_wave(h, 1, 3);
  const Field exact(h, oracle::sample(h, [&](const std::vector<Real>& x) { return std::polar(1.0, 3 * x[0] - 9 * t); }));
  EXPECT_LT(oracle::max_abs(free_propagator(e, t).values() - exact.values()), 1e-13);
}

TEST(Evolve, SplitStepLinearIsFreePropagator) {
  std::mt19937_64 rng(2);
  const GridPtr g = Grid::cube(1, 10.0, 64);
  const Field f(g, oracle::random_bandlimited(*g, rng));
  EXPECT_LT(oracle::max_abs(splitstep_step(f, 0.01, Params{0, 1, 1, 1}).values() - free_propagator(f, 0.01).values()),
            1e-14);
}

TEST(Evolve, SplitStepPlaneWaveIsExact) {
  const GridPtr g = Grid::cube(1, 2 * kPi, 32);
  const Real a = 0.8, k = 2, dt = 0.05;
  for (int eta : {1, 2}) {
    const Params p{1.5, eta, eta, 1};
    const Field out = splitstep_step(plane_wave(g, a, k), dt, p);
    const Real w = k * k + p.lambda * std::pow(a, 2 * eta);
    const CArray exact = oracle::sample(g, [&](const std::vector<Real>& x) { return a * std::polar(1.0, k * x[0] - w * dt); });
    EXPECT_LT(oracle::max_abs(out.values() - exact), 1e-14);
    EXPECT_DOUBLE_EQ(out.time(), dt);
  }
}

TEST(Evolve, SplitStepPreservesMass) {
  std::mt19937_64 rng(3);
  const GridPtr g = Grid::cube(2, 8.0, 32);
  const Field f(g, oracle::random_bandlimited(*g, rng));
  EXPECT_NEAR(mass(splitstep_step(f, 0.01, Params{-1, 1, 2, 2})), mass(f), 1e-13 * mass(f));
}

TEST(Evolve, PicardLinearConvergesImmediately) {
  const GridPtr g = Grid::cube(1, 20.0, 128);
  const Field f = oracle::gaussian(g);
  StepperConfig cfg;
  const PicardReport r = picard_solve(f, 0.3, cfg, Params{0, 1, 1, 1});
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 1);
  EXPECT_LT(oracle::max_abs(r.result.values() - free_propagator(f, 0.3).values()), 1e-14);
}

TEST(Evolve, PicardAgreesWithSplitStep) {
  const GridPtr g = Grid::cube(1, 40.0, 512);
  const Field f = oracle::sech(g);
  StepperConfig cfg;
  cfg.quadrature_nodes = 41;
  const PicardReport r = picard_solve(f, 0.01, cfg, kSoliton);
  EXPECT_TRUE(r.converged);
  const Trajectory tr = evolve(f, oracle::stepper(1e-4, 0.01), kSoliton);
  EXPECT_LT(oracle::l2_diff(r.result, tr.back()), 1e-6);
}

TEST(Evolve, PicardContractionShrinksWithHorizon) {
  const GridPtr g = Grid::cube(1, 40.0, 256);
  const Field f = oracle::sech(g);
  StepperConfig cfg;
  std::vector<Real> rho;
  for (Real T : {0.08, 0.04, 0.02, 0.01}) {
    const PicardReport r = picard_solve(f, T, cfg, kSoliton);
    ASSERT_GE(r.contraction_factors.size(), 1u);
    rho.push_back(r.contraction_factors.front());
  }
  for (std::size_t i = 1; i < rho.size(); ++i) {
    EXPECT_LT(rho[i], rho[i - 1]);
    EXPECT_NEAR(rho[i - 1] / rho[i], 2.0, 0.5);
  }
}

TEST(Evolve, PicardDivergenceIsReported) {
  const GridPtr g = Grid::cube(1, 40.0, 256);
  StepperConfig cfg;
  cfg.picard_iters = 100;
  const PicardReport r = picard_solve(oracle::sech(g, 3), 2.0, cfg, Params{-8, 1, 1, 1});
  EXPECT_TRUE(r.diverged);
  EXPECT_FALSE(r.converged);
}

TEST(Evolve, FreeGaussianMatchesClosedForm) {
  const GridPtr g = Grid::cube(1, 80.0, 1024);
  const Trajectory tr = evolve(oracle::gaussian(g), oracle::stepper(1e-3, 2, 100), Params{0, 1, 1, 1});
  ASSERT_EQ(tr.status, Status::Completed);
  for (const Field& s : tr.snapshots) EXPECT_LT(oracle::l2_diff(s, oracle::free_gaussian(g, 1, s.time())), 1e-8);
}

TEST(Evolve, SolitonKeepsItsProfile) {
  const GridPtr g = Grid::cube(1, 40.0, 512);
  const Trajectory tr = evolve(oracle::sech(g), oracle::stepper(1e-3, 5), kSoliton);
  ASSERT_EQ(tr.status, Status::Completed);
  EXPECT_NEAR(tr.back().time(), 5.0, 1e-12);
  const RArray prof = g->coord(0).cosh().inverse();
  EXPECT_LT((tr.back().values().abs() - prof).abs().maxCoeff(), 1e-6);
  const CArray exact = prof.cast<Complex>() * std::polar(1.0, 5.0);
  EXPECT_LT(oracle::max_abs(tr.back().values() - exact), 1e-5);
}

TEST(Evolve, FocusingQuinticBlowsUp) {
  const GridPtr g = Grid::cube(1, 40.0, 1024);
  const Field f = oracle::sech(g, 3);
  StepperConfig cfg = oracle::stepper(1e-4, 1);
  cfg.blowup_threshold = 100 * sobolev_norm(f, 2);
  const Trajectory tr = evolve(f, cfg, Params{-1, 2, 2, 1});
  EXPECT_EQ(tr.status, Status::BlowUpDetected);
  EXPECT_LT(tr.status_time, 1.0);
  EXPECT_EQ(tr.hq_history.size(), 10u);
  EXPECT_GT(tr.hq_history.back().second, cfg.blowup_threshold);
}

TEST(Evolve, TailMassMonitor) {
  const GridPtr g = Grid::cube(1, 10.0, 128);
  try {
    evolve(oracle::gaussian(g, 1, 3), oracle::stepper(1e-3, 0.1), Params{0, 1, 1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HypothesisViolation);
  }
  StepperConfig cfg = oracle::stepper(1e-2, 20);
  cfg.tail_tol = 1e-4;
  const Trajectory tr = evolve(oracle::gaussian(g, 1, 0.5), cfg, Params{0, 1, 1, 1});
  EXPECT_EQ(tr.status, Status::TailMassViolation);
  EXPECT_GT(tail_mass(tr.back(), cfg.tail_shell), cfg.tail_tol);
}

TEST(Evolve, SecondOrderAccuracy) {
  const GridPtr g = Grid::cube(1, 40.0, 256);
  const Field f = oracle::gaussian(g, 1.2, 1.0, 1.0);
  const Params p{1, 1, 1, 1};
  const Real dt = 0.02;
  const Field ref = evolve(f, oracle::stepper(dt / 8, 1), p).back();
  const Real e1 = oracle::l2_diff(evolve(f, oracle::stepper(dt, 1), p).back(), ref);
  const Real e2 = oracle::l2_diff(evolve(f, oracle::stepper(dt / 2, 1), p).back(), ref);
  EXPECT_NEAR(e1 / e2, 4.0, 0.8);
}

TEST(Evolve, TimeReversal) {
  const GridPtr g = Grid::cube(1, 40.0, 256);
  const Field f = oracle::gaussian(g, 1.5, 1.0, 2.0);
  const Params p{-1, 1, 1, 1};
  const Real dt = 0.01;
  CArray psi = f.values();
  SplitStepper(g, p, dt).step(psi);
  SplitStepper(g, p, -dt).step(psi);
  EXPECT_LT(oracle::l2_diff(f.with_values(psi), f), dt * dt * dt);
}

TEST(Evolve, HistoryTracker) {
  const GridPtr g = Grid::cube(1, 30.0, 256);
  const Trajectory tr = evolve(oracle::gaussian(g, 1, 1.5, 1.0), oracle::stepper(1e-3, 0.4, 2), Params{1, 1, 1, 1});
  EXPECT_EQ(tr.h.size(), tr.size());
  EXPECT_EQ(tr.h.front().abs().maxCoeff(), 0.0);
  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    const Real dt2 = tr.snapshots[i + 1].time() - tr.snapshots[i - 1].time();
    const RArray fd = (tr.h[i + 1] - tr.h[i - 1]) / dt2;
    const RArray ex = tr.snapshots[i].time() * tr.snapshots[i].density();
    EXPECT_LT((fd - ex).abs().maxCoeff(), 1e-5);
  }
}

TEST(Evolve, SnapshotCadenceAndTimes) {
  const GridPtr g = Grid::cube(1, 30.0, 64);
  const Trajectory a = evolve(oracle::gaussian(g), oracle::stepper(1e-3, 1), Params{1, 1, 1, 1});
  EXPECT_EQ(a.size(), 201u);
  const auto t = a.times();
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GT(t[i], t[i - 1]);
  EXPECT_EQ(t.front(), 0.0);
  const Trajectory b = evolve(oracle::gaussian(g), oracle::stepper(0.03, 0.1), Params{1, 1, 1, 1});
  EXPECT_NEAR(b.back().time(), 0.1, 1e-15);
}

TEST(Evolve, RestartEqualsSingleRun) {
  const GridPtr g = Grid::cube(1, 30.0, 256);
  const Field f = oracle::gaussian(g, 1.2, 1.0, 1.0);
  const Params p{1, 1, 1, 1};
  const Trajectory full = evolve(f, oracle::stepper(1e-3, 1), p);
  const Trajectory half = evolve(f, oracle::stepper(1e-3, 0.5), p);
  const Trajectory rest = evolve_from(half, oracle::stepper(1e-3, 1));
  EXPECT_NEAR(rest.snapshots.front().time(), 0.5, 1e-12);
  EXPECT_LT(oracle::l2_diff(rest.back(), full.back()), 1e-12);
  EXPECT_LT((rest.h.back() - full.h.back()).abs().maxCoeff(), 1e-12);
}

TEST(Evolve, ContinuousDependence) {
  const GridPtr g = Grid::cube(1, 40.0, 256);
  const StepperConfig cfg = oracle::stepper(1e-3, 0.5, 50);
  const auto zero = continuous_dependence_experiment(oracle::sech(g), {0.0}, 0.5, cfg, kSoliton);
  for (Real e : zero.error[0]) EXPECT_EQ(e, 0.0);
  const auto lin = continuous_dependence_experiment(oracle::sech(g), {1e-3}, 0.5, cfg, Params{0, 1, 1, 1});
  for (Real e : lin.error[0]) EXPECT_NEAR(e, 1e-3, 1e-12);
  const auto sol = continuous_dependence_experiment(oracle::sech(g), {1e-3, 1e-4}, 0.5, cfg, kSoliton);
  EXPECT_LT(sol.curve_disagreement(0, 1, 0.5), 0.05);
}

TEST(Evolve, ConfigValidation) {
  StepperConfig c;
  c.dt = 2;
  c.t_final = 1;
  EXPECT_THROW(c.validate(), Error);
  c.dt = -1;
  EXPECT_THROW(c.validate(), Error);
  StepperConfig d;
  d.quadrature_nodes = 1;
  EXPECT_THROW(d.validate(), Error);
  EXPECT_EQ(status_from_string(to_string(Status::PicardDiverged)), Status::PicardDiverged);
  EXPECT_EQ(method_from_string("picard"), Method::Picard);
  EXPECT_THROW(method_from_string("rk4"), Error);
}

TEST(Evolve, PicardMethodTrajectory) {
  const GridPtr g = Grid::cube(1, 40.0, 256);
  StepperConfig cfg = oracle::stepper(0.01, 0.1);
  cfg.method = Method::Picard;
  cfg.quadrature_nodes = 21;
  const Trajectory a = evolve(oracle::sech(g), cfg, kSoliton);
  const Trajectory b = evolve(oracle::sech(g), oracle::stepper(1e-4, 0.1), kSoliton);
  EXPECT_EQ(a.status, Status::Completed);
  EXPECT_LT(oracle::l2_diff(a.back(), b.back()), 1e-5);
}
