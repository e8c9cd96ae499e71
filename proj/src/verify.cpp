#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "nls/app.hpp"
#include "nls/conserve.hpp"
#include "nls/morawetz.hpp"
#include "nls/nonlin.hpp"
#include "nls/scaling.hpp"

namespace nls {

namespace {

using Suite = std::vector<CheckResult>;

struct Recorder {
  std::string suite;
  Suite* out;

  // Passes when value <= limit.
  void upper(const std::string& name, Real value, Real limit, std::string detail = {}) {
    out->push_back({suite, name, std::isfinite(value) && value <= limit, value, limit, std::move(detail)});
  }
  void lower(const std::string& name, Real value, Real limit, std::string detail = {}) {
    out->push_back({suite, name, std::isfinite(value) && value >= limit, value, limit, std::move(detail)});
  }
  void flag(const std::string& name, bool ok, std::string detail = {}) {
    out->push_back({suite, name, ok, ok ? 1.0 : 0.0, 1.0, std::move(detail)});
  }
  void guard(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      out->push_back({suite, name, false, 0, 0, std::string("exception: ") + e.what()});
    }
  }
};

// Random field with spectrum supported on |k_d| <= n/4.
CArray random_bandlimited(const Grid& g, std::mt19937_64& rng, bool zero_mean = false) {
  std::normal_distribution<Real> nd;
  CArray fhat = CArray::Zero(g.size());
  for (Index p = 0; p < g.size(); ++p) {
    bool inside = true;
    for (int d = 0; d < g.dims(); ++d) {
      const Real k = std::abs(g.wavenumber(d)[p]) * g.extent(d) / (2 * kPi);
      inside = inside && k <= g.points(d) / 4;
    }
    if (inside) fhat[p] = Complex(nd(rng), nd(rng));
  }
  if (zero_mean) fhat[0] = 0;
  return g.inverse(fhat);
}

Real rel_err(const CArray& a, const CArray& b) {
  const Real scale = std::max(b.matrix().norm(), 1e-300);
  return (a - b).matrix().norm() / scale;
}

Real rel(Real a, Real b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<GridPtr> sample_grids() {
  return {Grid::cube(1, 20.0, 128), Grid::make({12.0, 16.0}, {32, 48}), Grid::cube(3, 10.0, 16)};
}

Field gaussian(const GridPtr& g, Real A, Real sigma, Real v = 0, Real shift = 0) {
  CArray psi(g->size());
  for (Index p = 0; p < g->size(); ++p) {
    Real r2 = 0;
    for (int d = 0; d < g->dims(); ++d) r2 += std::pow(g->coord(d)[p] - shift, 2);
    psi[p] = A * std::exp(-r2 / (2 * sigma * sigma)) * std::polar(1.0, 0.5 * v * g->coord(0)[p]);
  }
  return Field(g, psi);
}

Field sech(const GridPtr& g, Real A) {
  CArray psi(g->size());
  for (Index p = 0; p < g->size(); ++p) psi[p] = A / std::cosh(A * g->coord(0)[p]);
  return Field(g, psi);
}

// psi e^{i v x_0 / 2}
Field boost(const Field& f, Real v) {
  const RArray& x = f.grid().coord(0);
  CArray out = f.values();
  for (Index p = 0; p < out.size(); ++p) out[p] *= std::polar(1.0, 0.5 * v * x[p]);
  return f.with_values(out);
}

Real l2_diff(const Field& a, const Field& b) {
  return std::sqrt(integrate(a.grid(), (a.values() - b.values()).abs2()));
}

Field evolve_to(const Field& psi0, Real T, Real dt, const Params& p) {
  StepperConfig cfg;
  cfg.dt = dt;
  cfg.t_final = T;
  cfg.tail_tol = 1;
  const Trajectory tr = evolve(psi0, cfg, p);
  return tr.back();
}

void grid_suite(Recorder& r) {
  std::mt19937_64 rng(11);
  for (const GridPtr& g : sample_grids()) {
    const std::string tag = "N" + std::to_string(g->dims());
    r.guard("parseval_" + tag, [&] {
      const CArray f = random_bandlimited(*g, rng);
      const Real lhs = integrate(*g, f.abs2());
      const Real rhs = parseval_weight(*g) * g->forward(f).abs2().sum();
      r.upper("parseval_" + tag, rel(lhs, rhs), 1e-12);
    });
    r.guard("div_grad_" + tag, [&] {
      const CArray f = random_bandlimited(*g, rng);
      r.upper("div_grad_" + tag, rel_err(divergence(*g, gradient(*g, f)), laplacian(*g, f)), 1e-12);
    });
    r.guard("fractional_composition_" + tag, [&] {
      const CArray f = random_bandlimited(*g, rng, true);
      Real worst = 0;
      for (auto [s1, s2] : std::vector<std::pair<Real, Real>>{{0.5, 0.25}, {0.3, -0.7}, {1.0, 1.0}, {-0.5, 1.5}}) {
        const CArray lhs = fractional_laplacian(*g, fractional_laplacian(*g, f, s2), s1);
        worst = std::max(worst, rel_err(lhs, fractional_laplacian(*g, f, s1 + s2)));
      }
      r.upper("fractional_composition_" + tag, worst, 1e-10);
    });
  }
  r.guard("fractional_identity", [&] {
    const GridPtr g = Grid::cube(1, 10.0, 64);
    const CArray f = random_bandlimited(*g, rng);
    r.upper("fractional_identity", rel_err(fractional_laplacian(*g, f, 0), f), 1e-14);
    r.upper("fractional_unit_is_minus_laplacian", rel_err(fractional_laplacian(*g, f, 1), -laplacian(*g, f)), 1e-14);
  });
}

void field_suite(Recorder& r) {
  std::mt19937_64 rng(12);
  for (const GridPtr& g : sample_grids()) {
    const std::string tag = "N" + std::to_string(g->dims());
    r.guard("lp_scale_covariance_" + tag, [&] {
      const Field f(g, random_bandlimited(*g, rng));
      Real worst = 0;
      for (Complex c : {Complex(4, 0), Complex(0, -0.25), Complex(-1.5, 2)}) {
        const Field cf = f.with_values(c * f.values());
        for (Real p : {1.0, 2.0, 3.0, 4.0, kInf}) worst = std::max(worst, rel(lp_norm(cf, p), std::abs(c) * lp_norm(f, p)));
      }
      r.upper("lp_scale_covariance_" + tag, worst, 1e-14);
    });
    r.guard("sobolev_monotone_" + tag, [&] {
      Real worst = -kInf;
      for (int k = 0; k < 5; ++k) {
        const Field f(g, random_bandlimited(*g, rng));
        Real prev = sobolev_norm(f, 0);
        for (Real q : {0.5, 1.0, 1.5, 2.0, 3.0}) {
          const Real cur = sobolev_norm(f, q);
          worst = std::max(worst, prev - cur);
          prev = cur;
        }
      }
      r.upper("sobolev_monotone_" + tag, worst, 0.0, "max over q of ||f||_{q1} - ||f||_{q2}");
    });
    r.guard("embedding_" + tag, [&] {
      const Real q = g->dims() == 1 ? 1 : 2;
      const Real C = sobolev_embedding_constant(g->dims(), q);
      Real worst = 0;
      for (int k = 0; k < 5; ++k) worst = std::max(worst, embedding_check(Field(g, random_bandlimited(*g, rng)), q));
      worst = std::max(worst, embedding_check(unit_bump(g, q, 0.7), q));
      r.upper("embedding_" + tag, worst, C, "sup ratio vs constant");
    });
  }
}

void nonlin_suite(Recorder& r) {
  std::mt19937_64 rng(13);
  const GridPtr g = Grid::make({12.0, 16.0}, {32, 48});
  const Field f(g, random_bandlimited(*g, rng));
  for (int eta : {1, 2, 3}) {
    const Params p{-1.5, eta, eta, 2};
    const std::string tag = "eta" + std::to_string(eta);
    r.guard("gauge_" + tag, [&] {
      const Complex u = std::polar(1.0, 0.7);
      r.upper("gauge_" + tag,
              rel_err(apply_nonlinearity(f.with_values(u * f.values()), p).values(), u * apply_nonlinearity(f, p).values()),
              1e-14);
    });
    r.guard("homogeneity_" + tag, [&] {
      const Real c = 1.7;
      const CArray lhs = apply_nonlinearity(f.with_values(c * f.values()), p).values();
      r.upper("homogeneity_" + tag, rel_err(lhs, std::pow(c, 2 * eta + 1) * apply_nonlinearity(f, p).values()), 1e-13);
    });
    r.guard("h1_rotation_" + tag, [&] {
      Real worst = 0;
      std::normal_distribution<Real> nd;
      for (int k = 0; k < 100; ++k) {
        const Complex a(nd(rng), nd(rng)), b(nd(rng), nd(rng));
        const Complex u = std::polar(1.0, nd(rng));
        worst = std::max(worst, rel(h1_ratio(u * a, u * b, p), h1_ratio(a, b, p)));
      }
      r.upper("h1_rotation_" + tag, worst, 1e-12);
    });
  }
  r.guard("gn_scale_invariance", [&] {
    const GNExponents e = gn_solve(0.5, 1.0, 2, 2.0, 2.0, 4.0);
    const Real base = gn_check(f, e);
    Real worst = 0;
    for (Real c : {1e-3, 0.5, 7.0, 1e4}) worst = std::max(worst, rel(gn_check(f.with_values(c * f.values()), e), base));
    r.upper("gn_scale_invariance", worst, 1e-12);
    r.upper("gn_residual", std::abs(e.residual()), 1e-14);
  });
}

void evolve_suite(Recorder& r) {
  const Params soliton{-2, 1, 1, 1};
  const GridPtr g = Grid::cube(1, 40.0, 256);
  r.guard("splitstep_mass_1e4_steps", [&] {
    const Field psi0 = sech(g, 1.0);
    SplitStepper st(g, soliton, 1e-3);
    CArray psi = psi0.values();
    for (int k = 0; k < 10000; ++k) st.step(psi);
    r.upper("splitstep_mass_1e4_steps", rel(mass(psi0.with_values(psi)), mass(psi0)), 1e-12);
  });
  r.guard("strang_order", [&] {
    const Field psi0 = boost(sech(g, 1.0), 1.0);
    const Real dt = 0.04;
    const Field ref = evolve_to(psi0, 1.0, dt / 8, soliton);
    const Real e1 = l2_diff(evolve_to(psi0, 1.0, dt, soliton), ref);
    const Real e2 = l2_diff(evolve_to(psi0, 1.0, dt / 2, soliton), ref);
    const Real ratio = e1 / e2;
    r.upper("strang_order_ratio_dev", std::abs(ratio - 4) / 4, 0.2, "error ratio " + std::to_string(ratio));
  });
  r.guard("time_reversal", [&] {
    const Real dt = 1e-2;
    const Field psi0 = sech(g, 1.5);
    CArray psi = psi0.values();
    SplitStepper(g, soliton, dt).step(psi);
    SplitStepper(g, soliton, -dt).step(psi);
    r.upper("time_reversal", l2_diff(psi0.with_values(psi), psi0), std::pow(dt, 3));
  });
  r.guard("picard_vs_splitstep", [&] {
    const Field psi0 = sech(g, 1.0);
    StepperConfig cfg;
    cfg.quadrature_nodes = 41;
    cfg.picard_iters = 60;
    const PicardReport pr = picard_solve(psi0, 0.01, cfg, soliton);
    const Field ss = evolve_to(psi0, 0.01, 1e-4, soliton);
    r.upper("picard_vs_splitstep", l2_diff(pr.result, ss), 1e-6);
  });
  r.guard("history_tracker", [&] {
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.5;
    cfg.snapshot_every = 10;
    const Trajectory tr = evolve(gaussian(g, 1.0, 1.5), cfg, Params{1, 1, 1, 1});
    r.upper("history_zero_at_t0", tr.h.front().abs().maxCoeff(), 0.0);
    Real worst = 0;
    for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
      const Real dt2 = tr.snapshots[i + 1].time() - tr.snapshots[i - 1].time();
      const RArray fd = (tr.h[i + 1] - tr.h[i - 1]) / dt2;
      const RArray exact = tr.snapshots[i].time() * tr.snapshots[i].density();
      worst = std::max(worst, (fd - exact).abs().maxCoeff() / std::max(exact.abs().maxCoeff(), 1e-300));
    }
    r.upper("history_derivative", worst, 1e-3);
  });
}

void conserve_suite(Recorder& r) {
  const GridPtr g = Grid::cube(1, 40.0, 512);
  const Params p{-2, 1, 1, 1};
  r.guard("conservation_along_run", [&] {
    std::vector<Real> e_drift;
    for (Real dt : {2e-3, 1e-3}) {
      StepperConfig cfg;
      cfg.dt = dt;
      cfg.t_final = 1;
      const Field psi0 = boost(gaussian(g, 1.5, 1.0), 1.0);
      const DriftSummary d = drifts(diagnostics(evolve(psi0, cfg, Params{1, 1, 1, 1}), false));
      if (dt == 1e-3) {
        r.upper("mass_drift", d.mass_rel, 1e-10);
        r.upper("momentum_drift", d.momentum_abs, 1e-8);
      }
      e_drift.push_back(d.energy_rel);
    }
    r.upper("energy_drift", e_drift[1], 1e-4);
    r.upper("energy_drift_order_dev", std::abs(e_drift[0] / e_drift[1] - 4) / 4, 0.2,
            "ratio " + std::to_string(e_drift[0] / e_drift[1]));
  });
  r.guard("gauge_invariance", [&] {
    std::mt19937_64 rng(14);
    const GridPtr g2 = Grid::make({12.0, 16.0}, {32, 48});
    const Field f(g2, random_bandlimited(*g2, rng));
    const Field u = f.with_values(std::polar(1.0, 1.1) * f.values());
    const Params p2{1, 1, 2, 2};
    Real worst = std::max(rel(mass(u), mass(f)), rel(energy(u, p2), energy(f, p2)));
    worst = std::max(worst, (momentum(u) - momentum(f)).norm() / momentum(f).norm());
    worst = std::max(worst, (lagrangian_density(u, p2) - lagrangian_density(f, p2)).abs().maxCoeff() /
                                lagrangian_density(f, p2).abs().maxCoeff());
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n)
        worst = std::max(worst, (symmetric_tensor(u, m, n) - symmetric_tensor(f, m, n)).abs().maxCoeff() /
                                    symmetric_tensor(f, m, n).abs().maxCoeff());
    r.upper("gauge_invariance", worst, 1e-12);
  });
  r.guard("galilean_shift", [&] {
    const Field f = gaussian(g, 1.0, 1.0);
    const Real v = 2 * (2 * kPi * 3 / g->extent(0));
    const Field b = boost(f, v);
    const Real shift = momentum(b)[0] - momentum(f)[0];
    r.upper("galilean_shift", rel(shift, 0.5 * v * mass(f)), 1e-10);
  });
}

void morawetz_suite(Recorder& r) {
  std::mt19937_64 rng(15);
  std::normal_distribution<Real> nd;
  std::uniform_real_distribution<Real> ud(-3, 3);

  // Finite-difference Laplacians of the weights against their closed forms.
  r.guard("laplacian_quadratic_weight", [&] {
    Real worst = 0;
    const WeightFn w = WeightFn::quadratic();
    for (int N = 1; N <= 3; ++N) {
      for (int k = 0; k < 200; ++k) {
        Point x(N);
        for (int d = 0; d < N; ++d) x[d] = ud(rng);
        const Real h = 1e-3;
        Real fd = 0;
        for (int d = 0; d < N; ++d) {
          Point e = Point::Zero(N);
          e[d] = h;
          fd += (w.value(x + e) - 2 * w.value(x) + w.value(x - e)) / (h * h);
        }
        worst = std::max({worst, std::abs(fd - 2.0 * N) / (2.0 * N), std::abs(w.laplacian(x) - 2.0 * N)});
      }
    }
    r.upper("laplacian_quadratic_weight", worst, 1e-6);
  });
  r.guard("laplacian_pair_distance", [&] {
    Real worst = 0;
    const WeightFn w = WeightFn::pair_distance();
    for (int N = 1; N <= 3; ++N) {
      for (int k = 0; k < 200; ++k) {
        Point x(N), y(N);
        for (int d = 0; d < N; ++d) {
          x[d] = ud(rng);
          y[d] = ud(rng);
        }
        const Point z = x - y;
        const Real rr = z.norm();
        if (rr < 0.1) continue;
        const Real h = 1e-3 * rr;
        Real fd = 0;
        for (int d = 0; d < N; ++d) {
          Point e = Point::Zero(N);
          e[d] = h;
          fd += ((x + e - y).norm() - 2 * rr + (x - e - y).norm()) / (h * h);
        }
        const Real exact = (N - 1) / rr;
        worst = std::max({worst, std::abs(fd - exact) * rr, std::abs(w.laplacian(z) - exact) * rr});
      }
    }
    r.upper("laplacian_pair_distance", worst, 1e-5, "error scaled by |x-y|");
  });
  r.guard("hessian_psd", [&] {
    Real min_form = kInf, fd_dev = 0, scale_dev = 0;
    for (int k = 0; k < 10000; ++k) {
      const int N = 1 + k % 3;
      Point x(N), y(N), v(N);
      for (int d = 0; d < N; ++d) {
        x[d] = ud(rng);
        y[d] = ud(rng);
        v[d] = nd(rng);
      }
      if ((x - y).norm() < 1e-3) continue;
      const HessianCheck c = hessian_pd_check(x, y, v);
      min_form = std::min(min_form, c.closed_form);
      if (k % 10 == 0) {
        fd_dev = std::max(fd_dev, std::abs(c.finite_difference - c.closed_form) * (x - y).norm() / v.squaredNorm());
        const Real s = 2.5;
        const HessianCheck cs = hessian_pd_check(y + s * (x - y), y, v);
        scale_dev = std::max(scale_dev, std::abs(cs.closed_form * s - c.closed_form) / std::max(v.squaredNorm() / (x - y).norm(), 1e-300));
      }
    }
    r.lower("hessian_psd_min_form", min_form, -1e-12, "10000 samples");
    r.upper("hessian_fd_agreement", fd_dev, 1e-5);
    r.upper("hessian_scale_invariance", scale_dev, 1e-12);
  });
  r.guard("fractional_composition", [&] {
    Real worst = 0;
    for (const GridPtr& g : sample_grids()) {
      const CArray f = random_bandlimited(*g, rng, true);
      for (auto [s1, s2] : std::vector<std::pair<Real, Real>>{{0.25, 0.5}, {0.75, -0.25}, {-0.5, -0.5}}) {
        worst = std::max(worst, rel_err(fractional_laplacian(*g, fractional_laplacian(*g, f, s2), s1),
                                        fractional_laplacian(*g, f, s1 + s2)));
      }
    }
    r.upper("fractional_composition", worst, 1e-10);
  });

  r.guard("real_fields_vanish", [&] {
    const GridPtr g = Grid::make({10.0, 10.0}, {16, 16});
    const Field f(g, random_bandlimited(*g, rng).real().cast<Complex>());
    r.upper("real_fields_vanish", std::max(std::abs(morawetz_11(f, WeightFn::quadratic())),
                                           std::abs(morawetz_22_direct(f))),
            0.0);
  });
  r.guard("m22_translation", [&] {
    const GridPtr g = Grid::cube(1, 40.0, 256);
    const CArray a = boost(gaussian(g, 1.0, 1.0, 0.0, -4.0), 2.0).values() +
                     boost(gaussian(g, 0.7, 1.5, 0.0, 3.0), -1.0).values();
    // Translation by 16 cells; the data is negligible near the box edge.
    CArray b(a.size());
    for (Index p = 0; p < a.size(); ++p) b[(p + 16) % a.size()] = a[p];
    const Real base = morawetz_22(Field(g, a));
    r.upper("m22_translation", rel(morawetz_22(Field(g, b)), base), 1e-8, "base " + std::to_string(base));
  });
  // Pseudo-conformal quantity along an eta N = 2 run.
  r.guard("pseudo_conformal_2d", [&] {
    const GridPtr g = Grid::cube(2, 20.0, 64);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.5;
    cfg.snapshot_every = 50;
    const Trajectory tr = evolve(gaussian(g, 1.0, 1.0), cfg, Params{2, 1, 2, 2});
    std::vector<Real> P;
    Real hist = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const PseudoConformal pc = pseudo_conformal(tr, i);
      P.push_back(pc.total);
      hist = std::max(hist, std::abs(pc.history));
    }
    Real drift = 0;
    for (Real x : P) drift = std::max(drift, rel(x, P.front()));
    r.upper("pseudo_conformal_2d_drift", drift, 1e-3);
    r.upper("pseudo_conformal_2d_history", hist, 1e-12);
    const VirialReport vr = virial_consistency(tr);
    r.upper("virial_consistency", vr.max_rel_mismatch, 1e-3);
  });
  r.guard("pseudo_conformal_sign", [&] {
    // dP/dt against lambda (2 - N eta) t for N = 1, eta = 1 and eta = 2 defocusing runs.
    const GridPtr g = Grid::cube(1, 40.0, 512);
    Real worst_ratio = 0;
    bool sign_ok = true;
    for (int eta : {1, 2}) {
      StepperConfig cfg;
      cfg.dt = 1e-3;
      cfg.t_final = 0.5;
      cfg.snapshot_every = 25;
      const Params p{1, eta, eta, 1};
      const Trajectory tr = evolve(gaussian(g, 1.0, 1.0), cfg, p);
      std::vector<Real> P;
      for (std::size_t i = 0; i < tr.size(); ++i) P.push_back(pseudo_conformal(tr, i).total);
      Real scale = 0;
      for (Real x : P) scale = std::max(scale, std::abs(x));
      for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
        const Real dP = (P[i + 1] - P[i - 1]) / (tr.snapshots[i + 1].time() - tr.snapshots[i - 1].time());
        const Real expected = 4 * p.lambda * tr.snapshots[i].time() / (eta + 1.0) * (2 - eta) *
                              potential_integral(tr.snapshots[i], eta);
        if (eta == 1) {
          sign_ok = sign_ok && (dP > 0) == (expected > 0);
        } else {
          worst_ratio = std::max(worst_ratio, std::abs(dP) / scale);
        }
      }
    }
    r.flag("dPdt_sign_eta1", sign_ok);
    r.upper("dPdt_vanishes_eta2", worst_ratio, 1e-4);
  });
}

void scaling_suite(Recorder& r) {
  r.guard("rescale_mass_law", [&] {
    Real worst = 0;
    for (int N : {1, 2}) {
      const GridPtr g = Grid::cube(N, N == 1 ? 40.0 : 30.0, N == 1 ? 512 : 128);
      const Field f = gaussian(g, 1.0, 1.0);
      for (int eta : {1, 2}) {
        for (Real theta : {0.8, 1.25}) {
          const Field ft = rescale(f, theta, eta);
          worst = std::max(worst, rel(mass(ft), std::pow(theta, 2.0 / eta - N) * mass(f)));
        }
      }
    }
    r.upper("rescale_mass_law", worst, 1e-8);
  });
  r.guard("hcrit_invariance", [&] {
    const GridPtr g = Grid::cube(2, 48.0, 192);
    const Field f = gaussian(g, 1.0, 1.0).with_values(gaussian(g, 1.0, 1.0).values() * g->coord(0).cast<Complex>());
    const int eta = 2;
    const Real qc = critical_exponent(2, eta);
    const Real base = homogeneous_sobolev_norm(f, qc);
    Real worst = 0;
    for (Real theta : {0.8, 1.25}) worst = std::max(worst, rel(homogeneous_sobolev_norm(rescale(f, theta, eta), qc), base));
    r.upper("hcrit_invariance", worst, 1e-6);
  });
  r.guard("classification", [&] {
    bool ok = classify(2, 1, 1).mass == Regime::Critical && classify(1, 2, 1).mass == Regime::Critical &&
              classify(3, 2, 1).energy == Regime::Critical && classify(1, 1, 1).mass == Regime::Subcritical &&
              classify(3, 3, 1).hq == Regime::Supercritical && classify(3, 3, 2).hq == Regime::Subcritical &&
              classify(3, 1, 2).energy == Regime::Subcritical;
    r.flag("classification", ok);
  });
}

const std::map<std::string, std::function<void(Recorder&)>>& registry() {
  static const std::map<std::string, std::function<void(Recorder&)>> m = {
      {"grid", grid_suite},       {"field", field_suite},       {"nonlin", nonlin_suite}, {"evolve", evolve_suite},
      {"conserve", conserve_suite}, {"morawetz", morawetz_suite}, {"scaling", scaling_suite}};
  return m;
}

}  // namespace

std::vector<std::string> verify_suites() { return {"grid", "field", "nonlin", "evolve", "conserve", "morawetz", "scaling"}; }

std::vector<CheckResult> run_verify(const std::string& suite) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = verify_suites();
  } else if (registry().count(suite)) {
    names = {suite};
  } else {
    throw Error(ErrorCode::Config, "unknown verify suite '" + suite + "'");
  }
  std::vector<CheckResult> out;
  for (const auto& n : names) {
    Recorder r{n, &out};
    registry().at(n)(r);
  }
  return out;
}

}  // namespace nls
