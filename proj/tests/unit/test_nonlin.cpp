#include <gtest/gtest.h>

#include "nls/nonlin.hpp"
#include "oracles.hpp"

using namespace nls;
using oracle::kPi;

TEST(Nonlin, ApplyExamples) {
  const GridPtr g = Grid::cube(1, 2 * kPi, 16);
  const Params p{1, 1, 1, 1};
  EXPECT_EQ(oracle::max_abs(apply_nonlinearity(Field::zeros(g), p).values()), 0.0);
  const Field two(g, CArray::Constant(16, 2.0), 0.7);
  const Field f2 = apply_nonlinearity(two, p);
  EXPECT_EQ(f2.time(), 0.7);
  EXPECT_EQ(oracle::max_abs(f2.values() - 8.0), 0.0);
  const Field e(g, g->coord(0).unaryExpr([](Real x) { return std::polar(1.0, x); }));
  EXPECT_LT(oracle::max_abs(apply_nonlinearity(e, Params{-2, 1, 1, 1}).values() + 2.0 * e.values()), 1e-15);
}

TEST(Nonlin, GaugeEquivariance) {
  std::mt19937_64 rng(1);
  const GridPtr g = Grid::cube(2, 5.0, 16);
  const Field f(g, oracle::random_bandlimited(*g, rng));
  for (int eta : {1, 2, 3}) {
    const Params p{-1.3, eta, eta, 2};
    for (Real th : {0.3, 2.0, -1.1}) {
      const Complex u = std::polar(1.0, th);
      const CArray lhs = apply_nonlinearity(f.with_values(u * f.values()), p).values();
      const CArray rhs = u * apply_nonlinearity(f, p).values();
      EXPECT_LT((lhs - rhs).abs().maxCoeff(), 1e-14 * rhs.abs().maxCoeff());
    }
  }
}

TEST(Nonlin, Homogeneity) {
  std::mt19937_64 rng(2);
  const GridPtr g = Grid::cube(1, 5.0, 32);
  const Field f(g, oracle::random_bandlimited(*g, rng));
  for (int eta : {1, 2}) {
    const Params p{0.8, eta, eta, 1};
    for (Real c : {0.3, 1.7, 4.0}) {
      const CArray lhs = apply_nonlinearity(f.with_values(c * f.values()), p).values();
      const CArray rhs = std::pow(c, 2 * eta) * c * apply_nonlinearity(f, p).values();
      EXPECT_LT((lhs - rhs).abs().maxCoeff(), 1e-14 * rhs.abs().maxCoeff());
    }
  }
}

TEST(Nonlin, H1Examples) {
  const Params p{1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(h1_ratio(1.0, 0.0, p), 1.0);
  EXPECT_DOUBLE_EQ(h1_ratio(1.0, -1.0, p), 0.5);
  try {
    h1_ratio(0.0, 0.0, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDenominator);
  }
}

TEST(Nonlin, H1SweepBound) {
  std::mt19937_64 rng(3);
  std::normal_distribution<Real> nd;
  const Params p{1, 1, 1, 1};
  Real worst = 0;
  for (int k = 0; k < 100000; ++k) {
    const Complex a(nd(rng), nd(rng)), b(nd(rng), nd(rng));
    // Oracle: |F(a) - F(b)| / (|a - b| (|a|^2 + |b|^2)) computed directly.
    const Complex Fa = std::norm(a) * a, Fb = std::norm(b) * b;
    const Real direct = std::abs(Fa - Fb) / (std::abs(a - b) * (std::norm(a) + std::norm(b)));
    const Real r = h1_ratio(a, b, p);
    EXPECT_NEAR(r, direct, 1e-12 * direct);
    worst = std::max(worst, r);
  }
  EXPECT_LE(worst, 3 + 1e-9);
}

TEST(Nonlin, H1RotationInvariant) {
  std::mt19937_64 rng(4);
  std::normal_distribution<Real> nd;
  for (int eta : {1, 2, 3}) {
    const Params p{-2, eta, eta, 1};
    for (int k = 0; k < 200; ++k) {
      const Complex a(nd(rng), nd(rng)), b(nd(rng), nd(rng)), u = std::polar(1.0, nd(rng));
      EXPECT_NEAR(h1_ratio(u * a, u * b, p), h1_ratio(a, b, p), 1e-12 * h1_ratio(a, b, p));
    }
  }
}

TEST(Nonlin, H2RatioAndDerivatives) {
  const Params p{1, 2, 2, 1};
  // g(r) = r^5: g' = 5 r^4, g'' = 20 r^3.
  EXPECT_NEAR(std::abs(nonlinearity_derivative(2.0, 1, 1, 2)), 5 * 16.0, 1e-12);
  EXPECT_NEAR(std::abs(nonlinearity_derivative(2.0, 2, 1, 2)), 20 * 8.0, 1e-12);
  EXPECT_NEAR(std::abs(nonlinearity_derivative(Complex(0, 2), 0, 1, 2)), 32.0, 1e-12);
  std::mt19937_64 rng(5);
  std::normal_distribution<Real> nd;
  for (int sigma = 0; sigma <= 2; ++sigma) {
    Real worst = 0;
    for (int k = 0; k < 2000; ++k) worst = std::max(worst, h2_ratio(Complex(nd(rng), nd(rng)), Complex(nd(rng), nd(rng)), sigma, p));
    EXPECT_TRUE(std::isfinite(worst));
  }
  EXPECT_THROW(h2_ratio(1.0, 2.0, 5, p), Error);
  EXPECT_THROW(h2_ratio(0.0, 0.0, 1, p), Error);
}

TEST(Nonlin, GNIdentityInterpolation) {
  const GNExponents e = gn_solve(0, 1, 1, 2, 2, 2.0);
  EXPECT_NEAR(e.nu, 0.0, 1e-14);
  std::mt19937_64 rng(6);
  const GridPtr g = Grid::cube(1, 10.0, 64);
  for (int k = 0; k < 5; ++k) {
    const Field f(g, oracle::random_bandlimited(*g, rng));
    EXPECT_NEAR(gn_check(f, e), 1.0, 1e-12);
  }
}

TEST(Nonlin, GNPaperInstantiation) {
  // p = 2q/|alpha|, nu = |alpha|/q, gamma = q, s = inf with q = 2, |alpha| = 1, N = 1.
  const Real q = 2, a = 1;
  const GNExponents e = gn_solve(a, q, 1, 2, kInf, 2 * q / a);
  EXPECT_NEAR(e.nu, a / q, 1e-12);
  EXPECT_LT(std::abs(e.residual()), 1e-12);
  const GNExponents e2 = gn_solve(a, q, 1, 2, kInf, std::nullopt, a / q);
  EXPECT_NEAR(e2.p, 2 * q / a, 1e-12);
}

TEST(Nonlin, GNInadmissible) {
  try {
    gn_solve(2, 1, 1, 2, 2, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InadmissibleExponents);
  }
  EXPECT_THROW(gn_solve(1, 2, 1, 2, 2, 2.0, 0.5), Error);
}

TEST(Nonlin, GNRatioStableAcrossResolutions) {
  const GNExponents e = gn_solve(1, 2, 1, 2, 2, std::nullopt, 0.5);
  EXPECT_NEAR(e.p, 2.0, 1e-12);
  std::mt19937_64 rng(7);
  std::normal_distribution<Real> nd;
  const GridPtr g1 = Grid::cube(1, 2 * kPi, 64), g2 = Grid::cube(1, 2 * kPi, 128);
  Real worst1 = 0, worst2 = 0;
  for (int k = 0; k < 100; ++k) {
    std::vector<Complex> c(15);
    for (auto& z : c) z = Complex(nd(rng), nd(rng));
    auto trig = [&](const GridPtr& g) {
      return Field(g, oracle::sample(g, [&](const std::vector<Real>& x) {
                     Complex s = 0;
                     for (int j = 0; j < 15; ++j) s += c[j] * std::polar(1.0, (j - 7) * x[0]);
                     return s;
                   }));
    };
    const Real r1 = gn_check(trig(g1), e), r2 = gn_check(trig(g2), e);
    EXPECT_NEAR(r1, r2, 1e-10 * r1);
    worst1 = std::max(worst1, r1);
    worst2 = std::max(worst2, r2);
  }
  EXPECT_TRUE(std::isfinite(worst1));
  EXPECT_LE(worst1, 1.0 + 1e-12);  // Cauchy-Schwarz on the spectrum
  EXPECT_NEAR(worst1, worst2, 1e-10);
}

TEST(Nonlin, GNScaleInvariant) {
  std::mt19937_64 rng(8);
  const GridPtr g = Grid::cube(2, 6.0, 16);
  const Field f(g, oracle::random_bandlimited(*g, rng));
  const GNExponents e = gn_solve(0.5, 1, 2, 2, 2, 4.0);
  const Real base = gn_check(f, e);
  for (Real c : {1e-5, 3.0, 1e5}) EXPECT_NEAR(gn_check(f.with_values(c * f.values()), e), base, 1e-12 * base);
}
