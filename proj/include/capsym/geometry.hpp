#pragma once

#include "capsym/cone.hpp"
#include "capsym/gauge.hpp"
#include "capsym/grid.hpp"

namespace capsym {

// Measures of a region E = {phi < 0} ∩ cone, with phi interpolated linearly
// on a simplex split of every grid cell. The interface {phi = 0} is
// reconstructed per simplex (marching triangles / tetrahedra); the wall
// x_n = 0 is never part of the interface, it is measured separately as the
// wetted area.
//
// All of them throw TruncationError if phi < 0 at a node on an outer face of
// the grid box.

/// |E ∩ cone|, second-order accurate for smooth phi.
double grid_volume(const RegionSpec& region, const ConeSpec& cone);

/// Classical perimeter of E relative to the cone: (n-1)-measure of the
/// reconstructed interface. Throws InputError if phi vanishes identically.
double relative_perimeter(const RegionSpec& region, const ConeSpec& cone);

/// (n-1)-measure of E ∩ {x_n = 0} in the half-space. The overload taking a
/// cone returns 0 with a warning for a full-space cone.
double wetting_perimeter(const RegionSpec& region);
double wetting_perimeter(const RegionSpec& region, const ConeSpec& cone);

/// Integral of F(nu) over the reconstructed interface, nu the outer normal.
double anisotropic_perimeter(const RegionSpec& region, const GaugeSpec& g, const ConeSpec& cone);

/// Everything above in one pass over the grid.
struct RegionMeasures {
  double volume = 0.0;
  double perimeter = 0.0;
  double anisotropic_perimeter = 0.0;
  double wetting = 0.0;
};
RegionMeasures measure_region(const RegionSpec& region, const GaugeSpec& g, const ConeSpec& cone);

struct IsoperimetricReport {
  double ratio = 0.0;  // P_F(E) / |E|^{(n-1)/n}
  double bound = 0.0;  // n kappa^{1/n}
  double slack = 0.0;  // ratio - bound
  double volume = 0.0;
  double perimeter = 0.0;  // anisotropic
};

/// Throws InputError for an empty region.
IsoperimetricReport isoperimetric_check(const RegionSpec& region, const GaugeSpec& g, const ConeSpec& cone);

}  // namespace capsym
