#pragma once

#include <memory>
#include <vector>

#include "nls/core.hpp"

namespace nls {

struct FftPlan;

// Periodic box [-L_d/2, L_d/2) sampled row-major (dimension 0 slowest).
class Grid {
 public:
  Grid(std::vector<Real> extents, std::vector<int> points);

  static std::shared_ptr<const Grid> make(std::vector<Real> extents, std::vector<int> points);
  static std::shared_ptr<const Grid> cube(int dims, Real extent, int points);

  int dims() const { return static_cast<int>(points_.size()); }
  int points(int d) const { return points_.at(d); }
  Real extent(int d) const { return extents_.at(d); }
  Real spacing(int d) const { return extents_.at(d) / points_.at(d); }
  const std::vector<int>& shape() const { return points_; }
  const std::vector<Real>& extents() const { return extents_; }
  Index size() const { return size_; }
  Real cell_volume() const { return cell_volume_; }

  // Per-point coordinate x_d.
  const RArray& coord(int d) const { return coord_.at(d); }
  // Per-point wavenumber xi_d in FFT order, Nyquist kept (even multipliers).
  const RArray& wavenumber(int d) const { return xi_.at(d); }
  // Same with the Nyquist entry zeroed (odd multipliers).
  const RArray& wavenumber_odd(int d) const { return xi_odd_.at(d); }
  const RArray& xi2() const { return xi2_; }
  // Flat index of the multi-index (i_0, ..., i_{N-1}).
  Index flat(const std::vector<int>& idx) const;

  // Unnormalized forward transform.
  CArray forward(const CArray& f) const;
  // Inverse transform divided by size().
  CArray inverse(const CArray& fhat) const;

  bool same_shape(const Grid& other) const;

 private:
  std::vector<Real> extents_;
  std::vector<int> points_;
  Index size_ = 0;
  Real cell_volume_ = 0;
  std::vector<RArray> coord_;
  std::vector<RArray> xi_;
  std::vector<RArray> xi_odd_;
  RArray xi2_;
  std::shared_ptr<const FftPlan> plan_;
};

using GridPtr = std::shared_ptr<const Grid>;

struct Wavenumbers {
  std::vector<RArray> xi;
  RArray xi2;
  RArray bracket2;  // 1 + |xi|^2
};

Wavenumbers wavenumbers(const Grid& grid);

// (prod h_d) * sum f
Real integrate(const Grid& grid, const RArray& f);

// Normalization such that integrate(|f|^2) == parseval_weight * sum |fhat|^2.
inline Real parseval_weight(const Grid& grid) { return grid.cell_volume() / static_cast<Real>(grid.size()); }

// Array-level spectral operators. Outputs of real inputs are kept real.
std::vector<CArray> gradient(const Grid& grid, const CArray& f);
CArray partial(const Grid& grid, const CArray& f, int d);
CArray laplacian(const Grid& grid, const CArray& f);
CArray fractional_laplacian(const Grid& grid, const CArray& f, Real s);
CArray divergence(const Grid& grid, const std::vector<CArray>& v);

// Spectrum-level multiplier |xi|^{2s}; throws NegativePowerZeroMode for s < 0 and nonzero mean.
CArray fractional_multiplier(const Grid& grid, const CArray& fhat, Real s);

bool is_real(const CArray& f);

}  // namespace nls
