#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "nls/field.hpp"

namespace nls {

namespace {

constexpr char kMagic[4] = {'N', 'L', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& buf, double v) {
  const auto u = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(u >> (8 * i)));
}

class Reader {
 public:
  Reader(const std::vector<unsigned char>& buf, const std::string& path) : buf_(buf), path_(path) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  double f64() {
    need(8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(u);
  }

  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) throw Error(ErrorCode::Io, "truncated snapshot file " + path_);
  }

  std::size_t remaining() const { return buf_.size() - pos_; }
  std::size_t pos_ = 0;

 private:
  const std::vector<unsigned char>& buf_;
  std::string path_;
};

}  // namespace

void write_field(const std::string& path, const Field& f) {
  const Grid& g = f.grid();
  std::vector<unsigned char> buf;
  buf.reserve(64 + 16 * static_cast<std::size_t>(f.size()));
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put_u32(buf, kVersion);
  put_u32(buf, static_cast<std::uint32_t>(g.dims()));
  for (int d = 0; d < g.dims(); ++d) put_u32(buf, static_cast<std::uint32_t>(g.points(d)));
  for (int d = 0; d < g.dims(); ++d) put_f64(buf, g.extent(d));
  put_f64(buf, f.time());
  for (Index p = 0; p < f.size(); ++p) {
    put_f64(buf, f.values()[p].real());
    put_f64(buf, f.values()[p].imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

Field read_field(const std::string& path, const GridPtr& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(buf, path);
  r.need(4);
  if (std::memcmp(buf.data(), kMagic, 4) != 0) throw Error(ErrorCode::Io, "bad magic in " + path);
  r.pos_ = 4;
  const std::uint32_t version = r.u32();
  if (version != kVersion) throw Error(ErrorCode::Io, "unsupported snapshot version in " + path);
  const std::uint32_t N = r.u32();
  if (N < 1 || N > 3) throw Error(ErrorCode::Io, "bad dimension in " + path);
  std::vector<int> n(N);
  std::vector<Real> L(N);
  for (auto& v : n) v = static_cast<int>(r.u32());
  for (auto& v : L) v = r.f64();
  const Real t = r.f64();

  GridPtr g = grid;
  if (!g || g->shape() != n || g->extents() != L) g = Grid::make(L, n);
  if (r.remaining() != 16 * static_cast<std::size_t>(g->size()))
    throw Error(ErrorCode::Io, "payload size mismatch in " + path);
  CArray values(g->size());
  for (Index p = 0; p < g->size(); ++p) {
    const double re = r.f64();
    const double im = r.f64();
    values[p] = Complex(re, im);
  }
  return Field(g, std::move(values), t);
}

Field read_field(const std::string& path) { return read_field(path, nullptr); }

}  // namespace nls
