#include "nls/field.hpp"

namespace nls {

std::vector<Field> gradient(const Field& f) {
  std::vector<Field> out;
  for (auto& c : gradient(f.grid(), f.values())) out.emplace_back(f.grid_ptr(), std::move(c), f.time());
  return out;
}

Field laplacian(const Field& f) { return f.with_values(laplacian(f.grid(), f.values())); }

Field fractional_laplacian(const Field& f, Real s) {
  return f.with_values(fractional_laplacian(f.grid(), f.values(), s));
}

Field divergence(const std::vector<Field>& v) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "empty vector field");
  std::vector<CArray> comps;
  for (const auto& c : v) {
    if (!c.grid().same_shape(v.front().grid())) throw Error(ErrorCode::InvalidArgument, "components on different grids");
    comps.push_back(c.values());
  }
  return v.front().with_values(divergence(v.front().grid(), comps));
}

}  // namespace nls
