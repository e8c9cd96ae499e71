#pragma once

#include <vector>

#include "nls/grid.hpp"

namespace nls {

// Treatment of the x = y cell in pair integrals.
enum class Diagonal {
  Zero,         // kernel value 0
  Clamp,        // |x - y| -> max(|x - y|, h/2)
  CellAverage,  // cell mean of 1/|z| (cubic cells, N >= 2); falls back to Clamp otherwise
};

// Linear (non-periodic) pair sums over grid points via zero-padded FFTs (2n points per dimension).
// All sums include the cell volume, i.e. approximate integrals over y.
class PairConvolver {
 public:
  PairConvolver(const Grid& grid, Diagonal diagonal = Diagonal::Zero);

  // U(x) = int rho(y) / |x - y| dy
  RArray inverse_distance(const RArray& rho) const;
  // V_d(x) = int rho(y) (x - y)_d / |x - y| dy
  std::vector<RArray> unit_vector(const RArray& rho) const;
  // A(y) = int (x - y)/|x - y| . Q(x) dx
  RArray pair_action(const std::vector<RArray>& q) const;

  const Grid& padded() const { return *padded_; }

 private:
  CArray embed(const RArray& f) const;
  RArray extract(const CArray& f) const;

  const Grid* grid_;
  GridPtr padded_;
  std::vector<Index> embed_index_;
  CArray inv_hat_;
  std::vector<CArray> unit_hat_;
};

// Mean of 1/|z| over a cube of side h, times h (N = 2, 3).
Real cell_average_inverse_distance(int dims);

}  // namespace nls
