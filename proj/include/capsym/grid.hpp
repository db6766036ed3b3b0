#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "capsym/cone.hpp"

namespace capsym {

/// Uniform node lattice with spacing h. Coordinates x_1..x_{n-1} run over
/// [-L, L]; x_n runs over [0, L] for a half-space lattice and [-L, L] for a
/// full-space lattice. Nodes are stored row-major with x_1 fastest and x_n
/// slowest.
struct GridSpec {
  int dim = 2;
  double half_extent = 4.0;
  double spacing = 1.0 / 256;
  ConeKind lattice = ConeKind::half_space;

  /// Defaults used across the project: n = 2 -> h = 1/256, L = 4; n = 3 -> h = 1/64, L = 2.
  static GridSpec default_for(int dim, ConeKind lattice = ConeKind::half_space);

  /// Throws InputError unless dim is 2 or 3, L, h > 0 and L/h is an integer.
  void validate() const;

  long cells_per_half() const;  // L / h
  std::array<long, 3> node_counts() const;
  std::size_t node_count() const;
  /// Coordinate of node index i along axis `axis`.
  double coord(int axis, long i) const;
  double cell_volume() const;

  bool operator==(const GridSpec&) const = default;
};

struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  /// Throws InputError on a size mismatch or a non-finite value.
  void validate() const;
  double& at(std::size_t i) { return values[i]; }
  double at(std::size_t i) const { return values[i]; }
};

/// The region {phi < 0} (intersected with the cone) of a sampled level function.
struct RegionSpec {
  GridSpec grid;
  std::vector<double> phi;

  void validate() const;
};

/// Index arithmetic over the part of a grid that lies inside a cone. For a
/// half-space cone the nodes with x_n < 0 (full lattices only) are dropped and
/// the plane x_n = 0 becomes the wall.
struct Lattice {
  int n = 2;
  std::array<long, 3> count{1, 1, 1};  // nodes per axis in the whole grid
  std::array<long, 3> stride{1, 1, 1};
  double h = 1.0;
  std::array<double, 3> origin{0, 0, 0};
  long first_layer = 0;  // first x_n layer inside the cone
  bool wall = false;     // whether first_layer is the wall plane x_n = 0

  /// Throws UnsupportedDomainError for a full-space cone on a half-space lattice.
  static Lattice make(const GridSpec& grid, const ConeSpec& cone);

  std::size_t index(long i, long j, long k = 0) const {
    return static_cast<std::size_t>(i * stride[0] + j * stride[1] + k * stride[2]);
  }
  /// Multi-index of a flat node index.
  std::array<long, 3> unflatten(std::size_t idx) const;
  std::array<double, 3> position(std::size_t idx) const;
  long layers() const { return count[n - 1]; }
  /// Flat range [begin, end) of node indices inside the cone.
  std::size_t node_begin() const { return static_cast<std::size_t>(first_layer * stride[n - 1]); }
  std::size_t node_end() const { return static_cast<std::size_t>(count[n - 1] * stride[n - 1]); }
  /// Trapezoid weight of a node: h^n halved once per boundary face it lies on
  /// (outer box faces and the wall).
  double node_weight(std::size_t idx) const;
  /// True if the node lies on an outer box face (the wall is not an outer face).
  bool on_outer_face(std::size_t idx) const;
};

/// Samples fn(x) at every node; x has length grid.dim.
std::vector<double> sample(const GridSpec& grid, const std::function<double(std::span<const double>)>& fn);

ScalarField make_field(const GridSpec& grid, const std::function<double(std::span<const double>)>& fn);
RegionSpec make_region(const GridSpec& grid, const std::function<double(std::span<const double>)>& fn);

}  // namespace capsym
