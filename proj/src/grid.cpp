#include "capsym/grid.hpp"

#include <cmath>
#include <string>

#include "capsym/error.hpp"

namespace capsym {

GridSpec GridSpec::default_for(int dim, ConeKind lattice) {
  if (dim == 2) return {2, 4.0, 1.0 / 256, lattice};
  if (dim == 3) return {3, 2.0, 1.0 / 64, lattice};
  throw InputError("grids support dim 2 or 3");
}

void GridSpec::validate() const {
  if (dim != 2 && dim != 3) throw InputError("grid dimension must be 2 or 3, got " + std::to_string(dim));
  if (!(half_extent > 0.0) || !(spacing > 0.0) || !std::isfinite(half_extent) || !std::isfinite(spacing)) {
    throw InputError("grid half_extent and spacing must be positive and finite");
  }
  const double ratio = half_extent / spacing;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || std::round(ratio) < 1.0) {
    throw InputError("grid half_extent / spacing must be a positive integer, got " + std::to_string(ratio));
  }
}

long GridSpec::cells_per_half() const { return std::lround(half_extent / spacing); }

std::array<long, 3> GridSpec::node_counts() const {
  const long m = cells_per_half();
  std::array<long, 3> c{1, 1, 1};
  for (int k = 0; k < dim - 1; ++k) c[k] = 2 * m + 1;
  c[dim - 1] = lattice == ConeKind::half_space ? m + 1 : 2 * m + 1;
  return c;
}

std::size_t GridSpec::node_count() const {
  const auto c = node_counts();
  return static_cast<std::size_t>(c[0] * c[1] * c[2]);
}

double GridSpec::coord(int axis, long i) const {
  if (axis == dim - 1 && lattice == ConeKind::half_space) return static_cast<double>(i) * spacing;
  return -half_extent + static_cast<double>(i) * spacing;
}

double GridSpec::cell_volume() const { return std::pow(spacing, dim); }

void ScalarField::validate() const {
  grid.validate();
  if (values.size() != grid.node_count()) {
    throw InputError("field has " + std::to_string(values.size()) + " values, grid expects " +
                     std::to_string(grid.node_count()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("field contains a non-finite value");
  }
}

void RegionSpec::validate() const {
  ScalarField{grid, phi}.validate();
}

Lattice Lattice::make(const GridSpec& grid, const ConeSpec& cone) {
  grid.validate();
  if (cone.dim != grid.dim) throw InputError("cone and grid dimensions differ");
  if (cone.kind == ConeKind::full_space && grid.lattice == ConeKind::half_space) {
    throw UnsupportedDomainError("a full-space cone needs a full-space lattice");
  }
  Lattice lat;
  lat.n = grid.dim;
  lat.count = grid.node_counts();
  lat.stride = {1, lat.count[0], lat.count[0] * lat.count[1]};
  lat.h = grid.spacing;
  for (int k = 0; k < lat.n; ++k) lat.origin[k] = grid.coord(k, 0);
  if (cone.kind == ConeKind::half_space) {
    lat.wall = true;
    lat.first_layer = grid.lattice == ConeKind::half_space ? 0 : grid.cells_per_half();
  }
  return lat;
}

std::array<long, 3> Lattice::unflatten(std::size_t idx) const {
  const long i = static_cast<long>(idx);
  std::array<long, 3> m{0, 0, 0};
  m[0] = i % count[0];
  m[1] = (i / stride[1]) % count[1];
  m[2] = i / stride[2];
  return m;
}

std::array<double, 3> Lattice::position(std::size_t idx) const {
  const auto m = unflatten(idx);
  std::array<double, 3> x{0, 0, 0};
  for (int k = 0; k < n; ++k) x[k] = origin[k] + static_cast<double>(m[k]) * h;
  return x;
}

double Lattice::node_weight(std::size_t idx) const {
  const auto m = unflatten(idx);
  double w = std::pow(h, n);
  for (int k = 0; k < n; ++k) {
    const long lo = (k == n - 1) ? first_layer : 0;
    if (m[k] < lo) return 0.0;
    if (m[k] == lo || m[k] == count[k] - 1) w *= 0.5;
  }
  return w;
}

bool Lattice::on_outer_face(std::size_t idx) const {
  const auto m = unflatten(idx);
  for (int k = 0; k < n; ++k) {
    if (m[k] == count[k] - 1) return true;
    if (m[k] == 0 && !(k == n - 1 && wall)) return true;
  }
  return false;
}

std::vector<double> sample(const GridSpec& grid, const std::function<double(std::span<const double>)>& fn) {
  grid.validate();
  const auto c = grid.node_counts();
  std::vector<double> out(grid.node_count());
  std::array<double, 3> x{0, 0, 0};
  std::size_t idx = 0;
  for (long k = 0; k < c[2]; ++k) {
    if (grid.dim == 3) x[2] = grid.coord(2, k);
    for (long j = 0; j < c[1]; ++j) {
      x[1] = grid.coord(1, j);
      for (long i = 0; i < c[0]; ++i) {
        x[0] = grid.coord(0, i);
        out[idx++] = fn(std::span<const double>(x.data(), static_cast<std::size_t>(grid.dim)));
      }
    }
  }
  return out;
}

ScalarField make_field(const GridSpec& grid, const std::function<double(std::span<const double>)>& fn) {
  return {grid, sample(grid, fn)};
}

RegionSpec make_region(const GridSpec& grid, const std::function<double(std::span<const double>)>& fn) {
  return {grid, sample(grid, fn)};
}

}  // namespace capsym
