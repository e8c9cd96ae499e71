#include "nls/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace nls {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NegativePowerZeroMode: return "NegativePowerZeroMode";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::InadmissibleExponents: return "InadmissibleExponents";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::NegativeEnergy: return "NegativeEnergy";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::SupportOverflow: return "SupportOverflow";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::CorruptState: return "CorruptState";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

namespace {

// Guards the FFTW planner.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct FftPlan {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit FftPlan(const std::vector<int>& shape) {
    Index total = 1;
    for (int n : shape) total *= n;
    fftw_complex* a = fftw_alloc_complex(total);
    fftw_complex* b = fftw_alloc_complex(total);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int rank = static_cast<int>(shape.size());
    fwd = fftw_plan_dft(rank, shape.data(), a, b, FFTW_FORWARD, flags);
    bwd = fftw_plan_dft(rank, shape.data(), a, b, FFTW_BACKWARD, flags);
    fftw_free(a);
    fftw_free(b);
    if (!fwd || !bwd) throw Error(ErrorCode::InvalidArgument, "FFT plan creation failed");
  }

  ~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
};

namespace {

std::shared_ptr<const FftPlan> cached_plan(const std::vector<int>& shape) {
  static std::map<std::vector<int>, std::weak_ptr<const FftPlan>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(shape);
  if (it != cache.end()) {
    if (auto p = it->second.lock()) return p;
  }
  std::shared_ptr<const FftPlan> p(new FftPlan(shape), [](const FftPlan* q) { delete q; });
  cache[shape] = p;
  return p;
}

}  // namespace

Grid::Grid(std::vector<Real> extents, std::vector<int> points)
    : extents_(std::move(extents)), points_(std::move(points)) {
  const int N = static_cast<int>(points_.size());
  if (N < 1 || N > 3) throw Error(ErrorCode::InvalidArgument, "grid dimension must be 1, 2 or 3");
  if (static_cast<int>(extents_.size()) != N)
    throw Error(ErrorCode::InvalidArgument, "extent count does not match dimension");
  size_ = 1;
  cell_volume_ = 1;
  for (int d = 0; d < N; ++d) {
    if (points_[d] < 8 || points_[d] % 2 != 0) {
      std::ostringstream os;
      os << "points per dimension must be even and >= 8 (got " << points_[d] << ")";
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
    if (!(extents_[d] > 0) || !std::isfinite(extents_[d]))
      throw Error(ErrorCode::InvalidArgument, "extent must be positive and finite");
    size_ *= points_[d];
    cell_volume_ *= spacing(d);
  }

  coord_.assign(N, RArray(size_));
  xi_.assign(N, RArray(size_));
  xi_odd_.assign(N, RArray(size_));
  xi2_ = RArray::Zero(size_);

  std::vector<Index> stride(N, 1);
  for (int d = N - 2; d >= 0; --d) stride[d] = stride[d + 1] * points_[d + 1];

  for (int d = 0; d < N; ++d) {
    const int n = points_[d];
    const Real L = extents_[d];
    const Real h = L / n;
    for (Index p = 0; p < size_; ++p) {
      const int j = static_cast<int>((p / stride[d]) % n);
      const int k = j < n / 2 ? j : j - n;
      const Real xi = 2 * kPi * k / L;
      coord_[d][p] = -L / 2 + j * h;
      xi_[d][p] = xi;
      xi_odd_[d][p] = (k == -n / 2) ? 0.0 : xi;
    }
    xi2_ += xi_[d].square();
  }

  plan_ = cached_plan(points_);
}

std::shared_ptr<const Grid> Grid::make(std::vector<Real> extents, std::vector<int> points) {
  return std::make_shared<const Grid>(std::move(extents), std::move(points));
}

std::shared_ptr<const Grid> Grid::cube(int dims, Real extent, int points) {
  return make(std::vector<Real>(dims, extent), std::vector<int>(dims, points));
}

Index Grid::flat(const std::vector<int>& idx) const {
  Index p = 0;
  for (int d = 0; d < dims(); ++d) p = p * points_[d] + idx.at(d);
  return p;
}

CArray Grid::forward(const CArray& f) const {
  if (f.size() != size_) throw Error(ErrorCode::InvalidArgument, "array size does not match grid");
  CArray out(size_);
  fftw_execute_dft(plan_->fwd, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(f.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

CArray Grid::inverse(const CArray& fhat) const {
  if (fhat.size() != size_) throw Error(ErrorCode::InvalidArgument, "array size does not match grid");
  CArray out(size_);
  fftw_execute_dft(plan_->bwd, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(fhat.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  out /= static_cast<Real>(size_);
  return out;
}

bool Grid::same_shape(const Grid& other) const {
  return points_ == other.points_ && extents_ == other.extents_;
}

Wavenumbers wavenumbers(const Grid& grid) {
  Wavenumbers w;
  for (int d = 0; d < grid.dims(); ++d) w.xi.push_back(grid.wavenumber(d));
  w.xi2 = grid.xi2();
  w.bracket2 = 1.0 + grid.xi2();
  return w;
}

Real integrate(const Grid& grid, const RArray& f) {
  if (f.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "array size does not match grid");
  return grid.cell_volume() * f.sum();
}

bool is_real(const CArray& f) { return (f.imag() == 0.0).all(); }

namespace {

CArray finish(const CArray& out, bool real_input) {
  if (!real_input) return out;
  return out.real().cast<Complex>();
}

}  // namespace

CArray partial(const Grid& grid, const CArray& f, int d) {
  if (d < 0 || d >= grid.dims()) throw Error(ErrorCode::IndexOutOfRange, "derivative direction out of range");
  CArray fhat = grid.forward(f);
  fhat *= Complex(0, 1) * grid.wavenumber_odd(d).cast<Complex>();
  return finish(grid.inverse(fhat), is_real(f));
}

std::vector<CArray> gradient(const Grid& grid, const CArray& f) {
  const bool real_input = is_real(f);
  const CArray fhat = grid.forward(f);
  std::vector<CArray> out;
  out.reserve(grid.dims());
  for (int d = 0; d < grid.dims(); ++d) {
    CArray g = fhat * (Complex(0, 1) * grid.wavenumber_odd(d).cast<Complex>());
    out.push_back(finish(grid.inverse(g), real_input));
  }
  return out;
}

CArray laplacian(const Grid& grid, const CArray& f) {
  CArray fhat = grid.forward(f);
  fhat *= (-grid.xi2()).cast<Complex>();
  return finish(grid.inverse(fhat), is_real(f));
}

CArray fractional_multiplier(const Grid& grid, const CArray& fhat, Real s) {
  if (s == 0) return fhat;
  CArray out = fhat;
  const RArray& k2 = grid.xi2();
  if (s < 0) {
    const Real scale = std::sqrt(fhat.abs2().sum());
    if (std::abs(fhat[0]) > 1e-10 * scale)
      throw Error(ErrorCode::NegativePowerZeroMode, "negative fractional power applied to a field with nonzero mean");
  }
  for (Index p = 0; p < out.size(); ++p) {
    out[p] = k2[p] == 0 ? Complex(0) : out[p] * std::pow(k2[p], s);
  }
  return out;
}

CArray fractional_laplacian(const Grid& grid, const CArray& f, Real s) {
  if (s == 0) return f;
  if (s == 1) return -laplacian(grid, f);
  return finish(grid.inverse(fractional_multiplier(grid, grid.forward(f), s)), is_real(f));
}

CArray divergence(const Grid& grid, const std::vector<CArray>& v) {
  if (static_cast<int>(v.size()) != grid.dims())
    throw Error(ErrorCode::InvalidArgument, "vector field component count does not match grid dimension");
  bool real_input = true;
  CArray acc = CArray::Zero(grid.size());
  for (int d = 0; d < grid.dims(); ++d) {
    real_input = real_input && is_real(v[d]);
    acc += grid.forward(v[d]) * (Complex(0, 1) * grid.wavenumber_odd(d).cast<Complex>());
  }
  return finish(grid.inverse(acc), real_input);
}

}  // namespace nls
