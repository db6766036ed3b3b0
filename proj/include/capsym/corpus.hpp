#pragma once

#include <cstdint>
#include <random>

#include "capsym/gauge.hpp"
#include "capsym/grid.hpp"

// Seeded random inputs shared by the tests, the acceptance battery and the
// suite command.
namespace capsym::corpus {

using Rng = std::mt19937_64;

/// Star-shaped region {|x - c| < R(direction)} with a smooth random radius
/// R = r0 (1 + sum of small harmonics). The centre sits near the wall so the
/// region is wetted; everything stays inside the box (0.8 L).
RegionSpec random_blob(const GridSpec& grid, Rng& rng, double r0);

/// Wulff sector {F°(x - shift) < r} in the half-space, shift along the wall.
RegionSpec wulff_sector(const GridSpec& grid, const GaugeSpec& g, double r, double shift = 0.0);

/// u = -sum a_i (1 - |A_i (x - c_i)|^2)_+^2 with random anisotropic A_i,
/// amplitudes in [0.5, 1.5] and supports of radius <= max_radius that stay
/// inside 0.9 L. Non-positive with compact support.
ScalarField random_bumps(const GridSpec& grid, Rng& rng, int count, double max_radius);

/// A smooth coefficient c(x) = amp (1 + sin(k.x + p)) >= 0.
ScalarField random_coefficient(const GridSpec& grid, Rng& rng, double amp);

}  // namespace capsym::corpus
