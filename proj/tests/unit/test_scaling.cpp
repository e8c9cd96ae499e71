#include <gtest/gtest.h>

#include "nls/conserve.hpp"
#include "nls/scaling.hpp"
#include "oracles.hpp"

using namespace nls;

TEST(Scaling, CriticalExponentExamples) {
  EXPECT_DOUBLE_EQ(critical_exponent(3, 2), 1.0);
  EXPECT_DOUBLE_EQ(critical_exponent(2, 1), 0.0);
  EXPECT_DOUBLE_EQ(critical_exponent(1, 2), 0.0);
  for (int N = 1; N <= 3; ++N)
    for (int eta = 1; eta <= 4; ++eta) EXPECT_NEAR(critical_exponent(N, eta), N / 2.0 - 1.0 / eta, 1e-15);
  EXPECT_THROW(critical_exponent(1, 0), Error);
}

TEST(Scaling, Classification) {
  const CriticalityReport a = classify(2, 1, 2);
  EXPECT_EQ(a.mass, Regime::Critical);
  EXPECT_EQ(a.energy, Regime::Subcritical);
  EXPECT_EQ(a.hq, Regime::Subcritical);
  const CriticalityReport b = classify(3, 2, 2);
  EXPECT_EQ(b.mass, Regime::Supercritical);
  EXPECT_EQ(b.energy, Regime::Critical);
  const CriticalityReport c = classify(3, 4, 1);
  EXPECT_EQ(c.energy, Regime::Supercritical);
  EXPECT_EQ(c.hq, Regime::Supercritical);
  EXPECT_EQ(classify(1, 1, 1).mass, Regime::Subcritical);
  EXPECT_EQ(classify(3, 2, 1).hq, Regime::Critical);
  EXPECT_STREQ(to_string(Regime::Critical), "critical");
}

TEST(Scaling, RescaleIdentity) {
  const GridPtr g = Grid::cube(1, 20.0, 128);
  const Field f = oracle::gaussian(g, 1, 1, 1).with_time(0.3);
  const Field r = rescale(f, 1.0, 2);
  EXPECT_EQ(oracle::max_abs(r.values() - f.values()), 0.0);
  EXPECT_EQ(r.time(), 0.3);
}

TEST(Scaling, RescaleMatchesClosedForm) {
  const GridPtr g = Grid::cube(2, 30.0, 128);
  const Field f = oracle::gaussian(g, 1, 1.2);
  for (Real theta : {0.7, 1.6}) {
    const Field r = rescale(f, theta, 1);
    const Field exact = oracle::gaussian(g, theta, 1.2 / theta);
    EXPECT_LT(oracle::max_abs(r.values() - exact.values()), 1e-10) << theta;
  }
}

TEST(Scaling, MassLaw) {
  for (int N : {1, 2}) {
    const GridPtr g = Grid::cube(N, N == 1 ? 40.0 : 30.0, N == 1 ? 512 : 128);
    const Field f = oracle::gaussian(g, 1, 1, 0, 0);
    for (int eta : {1, 2, 3})
      for (Real theta : {0.75, 1.3}) EXPECT_NEAR(mass(rescale(f, theta, eta)), std::pow(theta, 2.0 / eta - N) * mass(f), 1e-8 * mass(f));
  }
}

TEST(Scaling, CriticalNormInvariance) {
  const GridPtr g = Grid::cube(2, 48.0, 192);
  const Field base = oracle::gaussian(g);
  const Field f = base.with_values(base.values() * g->coord(0).cast<Complex>());
  const Real qc = critical_exponent(2, 2);
  const Real n0 = homogeneous_sobolev_norm(f, qc);
  for (Real theta : {0.8, 1.25}) EXPECT_NEAR(homogeneous_sobolev_norm(rescale(f, theta, 2), qc), n0, 1e-6 * n0);
  const GridPtr h = Grid::cube(3, 16.0, 32);
  const Field k = oracle::gaussian(h);
  const Real m0 = homogeneous_sobolev_norm(k, 1);
  for (Real theta : {0.8, 1.25}) EXPECT_NEAR(homogeneous_sobolev_norm(rescale(k, theta, 2), 1), m0, 1e-6 * m0);
}

TEST(Scaling, RescaledSolutionSolvesTheEquation) {
  const GridPtr g = Grid::cube(1, 40.0, 1024);
  const Params p{-2, 1, 1, 1};
  const Real theta = 2, T = 0.4;
  const Field f = oracle::sech(g);
  const Field psiT = evolve(f, oracle::stepper(1e-4, T), p).back();
  const Field scaled0 = rescale(f, theta, 1);
  EXPECT_EQ(scaled0.time(), 0.0);
  const Field scaledT = evolve(scaled0, oracle::stepper(1e-4 / (theta * theta), T / (theta * theta)), p).back();
  const Field expected = rescale(psiT, theta, 1);
  EXPECT_NEAR(expected.time(), T / (theta * theta), 1e-15);
  EXPECT_LT(oracle::l2_diff(scaledT, expected), 1e-5);
}

TEST(Scaling, SupportOverflow) {
  const GridPtr g = Grid::cube(1, 20.0, 256);
  const Field wide = oracle::gaussian(g, 1, 2.5);
  try {
    rescale(wide, 0.4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SupportOverflow);
  }
  const Field narrow = oracle::gaussian(g, 1, 0.3);
  EXPECT_THROW(rescale(narrow, 4.0, 1), Error);
  EXPECT_THROW(rescale(narrow, -1.0, 1), Error);
}
