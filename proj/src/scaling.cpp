#include "nls/scaling.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace nls {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
  }
  return "unknown";
}

Real critical_exponent(int dims, int eta) {
  if (eta < 1) throw Error(ErrorCode::InvalidArgument, "eta must be >= 1");
  return (dims * eta - 2.0) / (2.0 * eta);
}

namespace {

Regime compare(Real qc, Real level) {
  constexpr Real tol = 1e-12;
  if (std::abs(qc - level) <= tol) return Regime::Critical;
  return qc < level ? Regime::Subcritical : Regime::Supercritical;
}

using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Evaluates the 1-D trigonometric interpolant at theta * x_i from the spectrum along one axis.
RowMat evaluation_matrix(int n, Real L, Real theta) {
  RowMat B(n, n);
  const Real h = L / n;
  for (int i = 0; i < n; ++i) {
    const Real x = -L / 2 + i * h;
    const Real u = theta * x;
    if (std::abs(u) > L / 2) {
      B.row(i).setZero();
      continue;
    }
    const Real s = u + L / 2;
    for (int j = 0; j < n; ++j) {
      const int k = j < n / 2 ? j : j - n;
      const Real xi = 2 * kPi * k / L;
      B(i, j) = (k == -n / 2 ? Complex(std::cos(xi * s), 0) : std::polar(1.0, xi * s)) / static_cast<Real>(n);
    }
  }
  return B;
}

void apply_along_axis(CArray& a, const std::vector<int>& shape, int axis, const RowMat& B) {
  const int n = shape[axis];
  Index inner = 1;
  for (std::size_t d = axis + 1; d < shape.size(); ++d) inner *= shape[d];
  const Index outer = a.size() / (n * inner);
  for (Index o = 0; o < outer; ++o) {
    Eigen::Map<RowMat> slab(a.data() + o * n * inner, n, inner);
    RowMat out = B * slab;
    slab = out;
  }
}

}  // namespace

CriticalityReport classify(int dims, int eta, Real q) {
  CriticalityReport r;
  r.q_crit = critical_exponent(dims, eta);
  r.mass = compare(r.q_crit, 0);
  r.energy = compare(r.q_crit, 1);
  r.hq = compare(r.q_crit, q);
  return r;
}

Field rescale(const Field& f, Real theta, int eta, Real tol) {
  if (!(theta > 0) || !std::isfinite(theta)) throw Error(ErrorCode::InvalidArgument, "theta must be positive");
  if (eta < 1) throw Error(ErrorCode::InvalidArgument, "eta must be >= 1");
  const Grid& g = f.grid();
  const Real amp = std::pow(theta, 1.0 / eta);
  const Real t_new = f.time() / (theta * theta);
  if (theta == 1) return Field(f.grid_ptr(), f.values() * amp, t_new);

  const CArray fhat = g.forward(f.values());
  if (theta < 1) {
    const RArray rho = f.density();
    Real outside = 0;
    for (Index p = 0; p < g.size(); ++p) {
      for (int d = 0; d < g.dims(); ++d) {
        if (std::abs(g.coord(d)[p]) > theta * g.extent(d) / 2) {
          outside += rho[p];
          break;
        }
      }
    }
    const Real total = rho.sum();
    if (total > 0 && outside / total > tol) {
      std::ostringstream os;
      os << "rescaled support leaves the box (mass fraction " << outside / total << ")";
      throw Error(ErrorCode::SupportOverflow, os.str());
    }
  } else {
    const RArray e = fhat.abs2();
    Real outside = 0;
    for (Index p = 0; p < g.size(); ++p) {
      for (int d = 0; d < g.dims(); ++d) {
        const Real ximax = kPi * g.points(d) / g.extent(d);
        if (std::abs(g.wavenumber(d)[p]) * theta > ximax) {
          outside += e[p];
          break;
        }
      }
    }
    const Real total = e.sum();
    if (total > 0 && outside / total > tol) {
      std::ostringstream os;
      os << "rescaled spectrum exceeds the grid bandwidth (energy fraction " << outside / total << ")";
      throw Error(ErrorCode::SupportOverflow, os.str());
    }
  }

  CArray out = fhat;
  for (int d = 0; d < g.dims(); ++d) apply_along_axis(out, g.shape(), d, evaluation_matrix(g.points(d), g.extent(d), theta));
  return Field(f.grid_ptr(), out * amp, t_new);
}

}  // namespace nls
