#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nls/grid.hpp"

namespace nls {

// Complex state on a grid at one time instant. Immutable; non-finite values are rejected.
class Field {
 public:
  Field(GridPtr grid, CArray values, Real time = 0);

  static Field zeros(GridPtr grid, Real time = 0);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const CArray& values() const { return values_; }
  Real time() const { return time_; }
  Index size() const { return values_.size(); }
  int dims() const { return grid_->dims(); }

  Field with_values(CArray values) const { return Field(grid_, std::move(values), time_); }
  Field with_time(Real t) const { return Field(grid_, values_, t); }

  RArray density() const { return values_.abs2(); }

 private:
  GridPtr grid_;
  CArray values_;
  Real time_;
};

struct Params {
  Real lambda = 0;
  int eta = 1;
  int q = 1;
  int dims = 1;

  // Throws HypothesisViolation unless eta >= 1, q > N/2 and q >= eta.
  void validate() const;
};

inline constexpr Real kInf = std::numeric_limits<Real>::infinity();

Real lp_norm(const Field& f, Real p);
Real sobolev_norm(const Field& f, Real q);
Real homogeneous_sobolev_norm(const Field& f, Real s);

// Spectral versions on a precomputed spectrum fhat.
Real sobolev_norm_spectral(const Grid& grid, const CArray& fhat, Real q);

Real sobolev_embedding_constant(int dims, Real q);
Real embedding_check(const Field& f, Real q);

std::vector<Field> gradient(const Field& f);
Field laplacian(const Field& f);
Field fractional_laplacian(const Field& f, Real s);
Field divergence(const std::vector<Field>& v);

// Binary snapshot format: "NLSF", u32 version, u32 N, u32 n_d[N], f64 L_d[N], f64 time, then re/im f64 pairs.
void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path);
// Reuses `grid` when the stored shape matches it.
Field read_field(const std::string& path, const GridPtr& grid);

}  // namespace nls
