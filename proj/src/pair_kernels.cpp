#include "nls/pair_kernels.hpp"

#include <cmath>

namespace nls {

Real cell_average_inverse_distance(int dims) {
  if (dims == 2) return 4 * std::log(1 + std::sqrt(2.0));
  if (dims == 3) return 2.380077363979557;
  throw Error(ErrorCode::InvalidArgument, "cell average of 1/|z| is defined for N = 2, 3");
}

PairConvolver::PairConvolver(const Grid& grid, Diagonal diagonal) : grid_(&grid) {
  const int N = grid.dims();
  std::vector<Real> ext(N);
  std::vector<int> pts(N);
  for (int d = 0; d < N; ++d) {
    ext[d] = 2 * grid.extent(d);
    pts[d] = 2 * grid.points(d);
  }
  padded_ = Grid::make(ext, pts);
  const Grid& P = *padded_;

  embed_index_.resize(grid.size());
  for (Index p = 0; p < grid.size(); ++p) {
    Index rem = p;
    Index q = 0;
    std::vector<int> idx(N);
    for (int d = N - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(rem % grid.points(d));
      rem /= grid.points(d);
    }
    for (int d = 0; d < N; ++d) q = q * P.points(d) + idx[d];
    embed_index_[p] = q;
  }

  Real hmin = grid.spacing(0);
  bool cubic = true;
  for (int d = 1; d < N; ++d) {
    hmin = std::min(hmin, grid.spacing(d));
    cubic = cubic && grid.spacing(d) == grid.spacing(0);
  }

  CArray inv(P.size());
  std::vector<CArray> unit(N, CArray(P.size()));
  std::vector<int> idx(N);
  for (Index p = 0; p < P.size(); ++p) {
    Index rem = p;
    for (int d = N - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(rem % P.points(d));
      rem /= P.points(d);
    }
    Real r2 = 0;
    std::vector<Real> z(N);
    for (int d = 0; d < N; ++d) {
      const int n = grid.points(d);
      const int o = idx[d] < n ? idx[d] : idx[d] - 2 * n;
      z[d] = o * grid.spacing(d);
      r2 += z[d] * z[d];
    }
    const Real r = std::sqrt(r2);
    if (r == 0) {
      Real k = 0;
      if (diagonal == Diagonal::Clamp || (diagonal == Diagonal::CellAverage && (!cubic || N == 1))) {
        k = 2 / hmin;
      } else if (diagonal == Diagonal::CellAverage) {
        k = cell_average_inverse_distance(N) / grid.spacing(0);
      }
      inv[p] = k;
      for (int d = 0; d < N; ++d) unit[d][p] = 0;
    } else {
      const Real rr = diagonal == Diagonal::Clamp ? std::max(r, hmin / 2) : r;
      inv[p] = 1 / rr;
      for (int d = 0; d < N; ++d) unit[d][p] = z[d] / r;
    }
  }
  inv_hat_ = P.forward(inv);
  for (int d = 0; d < N; ++d) unit_hat_.push_back(P.forward(unit[d]));
}

CArray PairConvolver::embed(const RArray& f) const {
  if (f.size() != grid_->size()) throw Error(ErrorCode::InvalidArgument, "array size does not match grid");
  CArray out = CArray::Zero(padded_->size());
  for (Index p = 0; p < f.size(); ++p) out[embed_index_[p]] = f[p];
  return out;
}

RArray PairConvolver::extract(const CArray& f) const {
  RArray out(grid_->size());
  for (Index p = 0; p < grid_->size(); ++p) out[p] = f[embed_index_[p]].real();
  return out;
}

RArray PairConvolver::inverse_distance(const RArray& rho) const {
  const CArray rh = padded_->forward(embed(rho));
  return grid_->cell_volume() * extract(padded_->inverse(rh * inv_hat_));
}

std::vector<RArray> PairConvolver::unit_vector(const RArray& rho) const {
  const CArray rh = padded_->forward(embed(rho));
  std::vector<RArray> out;
  for (const auto& k : unit_hat_) out.push_back(grid_->cell_volume() * extract(padded_->inverse(rh * k)));
  return out;
}

RArray PairConvolver::pair_action(const std::vector<RArray>& q) const {
  if (q.size() != unit_hat_.size()) throw Error(ErrorCode::InvalidArgument, "current has wrong component count");
  CArray acc = CArray::Zero(padded_->size());
  for (std::size_t d = 0; d < q.size(); ++d) acc += padded_->forward(embed(q[d])) * unit_hat_[d];
  // Odd kernel: sum_x K(x - y) Q(x) = -(K * Q)(y).
  return -grid_->cell_volume() * extract(padded_->inverse(acc));
}

}  // namespace nls
