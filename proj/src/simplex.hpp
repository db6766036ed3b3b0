#pragma once

// Cut-cell helpers shared by geometry, rearrangement and energy code.
//
// Each grid cell is split into simplices and the level function is
// interpolated linearly on each one. In 2D the cell volume is averaged over
// both diagonal triangulations; in 3D the Kuhn (main-diagonal) split into six
// tetrahedra is used, which is conforming across cells. Corners of a cell are
// numbered by bit masks: bit k set means +h along axis k.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "capsym/grid.hpp"

namespace capsym::detail {

struct Simplex {
  std::array<int, 4> corner;  // corner bit masks, first n+1 used
  double weight;              // fraction of the cell volume times the triangulation weight
};

// 2D: two triangulations, each with weight 1/2, each triangle is half the cell.
inline constexpr std::array<Simplex, 4> kTriangles{{
    {{0, 1, 3, 0}, 0.25},
    {{0, 3, 2, 0}, 0.25},
    {{0, 1, 2, 0}, 0.25},
    {{1, 3, 2, 0}, 0.25},
}};

// 3D Kuhn split: path 0 -> a -> a|b -> 7 for every axis permutation.
inline constexpr std::array<Simplex, 6> kTetrahedra{{
    {{0, 1, 3, 7}, 1.0 / 6},
    {{0, 1, 5, 7}, 1.0 / 6},
    {{0, 2, 3, 7}, 1.0 / 6},
    {{0, 2, 6, 7}, 1.0 / 6},
    {{0, 4, 5, 7}, 1.0 / 6},
    {{0, 4, 6, 7}, 1.0 / 6},
}};

// Triangles of the wall face (x_n = 0) in 3D that are faces of the Kuhn split.
inline constexpr std::array<std::array<int, 3>, 2> kWallTriangles{{{0, 1, 3}, {0, 2, 3}}};

inline std::span<const Simplex> simplices(int n) {
  if (n == 2) return {kTriangles.data(), kTriangles.size()};
  return {kTetrahedra.data(), kTetrahedra.size()};
}

/// Position of a corner in cell-local coordinates (units of h).
inline std::array<double, 3> corner_pos(int mask) {
  return {static_cast<double>(mask & 1), static_cast<double>((mask >> 1) & 1),
          static_cast<double>((mask >> 2) & 1)};
}

/// Flat offsets of the 2^n corners of a cell relative to its lower corner.
inline std::array<std::size_t, 8> corner_offsets(const Lattice& lat) {
  std::array<std::size_t, 8> off{};
  for (int m = 0; m < (1 << lat.n); ++m) {
    off[m] = static_cast<std::size_t>((m & 1) * lat.stride[0] + ((m >> 1) & 1) * lat.stride[1] +
                                      ((m >> 2) & 1) * lat.stride[2]);
  }
  return off;
}

/// Fraction of a simplex (unit measure) where the linear interpolant of the
/// n+1 vertex values is negative. Positions are needed for the 2-2 split in 3D.
double negative_fraction(int n, const double* v, const std::array<double, 3>* pos);

/// Interface piece inside one simplex: measure of {phi = 0} (in cell-local
/// units, multiply by h^{n-1}) and the unit normal pointing toward phi > 0.
/// Returns false when the simplex is not cut.
bool interface_piece(int n, const double* v, const std::array<double, 3>* pos, double& area,
                     std::array<double, 3>& normal);

/// Fraction of [0,1] (n = 2) or of a unit wall triangle (n = 3) where the
/// linear interpolant of the given values is negative.
double negative_fraction_1d(double a, double b);
double negative_fraction_tri(double a, double b, double c);

/// Throws TruncationError if phi < 0 at a node on an outer face of the box.
void check_not_truncated(const Lattice& lat, std::span<const double> phi, const char* what);

}  // namespace capsym::detail
