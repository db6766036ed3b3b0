#pragma once

#include <cstddef>
#include <vector>

#include "capsym/grid.hpp"

namespace capsym::detail {

// Nodal gradient: central differences inside, second-order one-sided at the
// wall layer and at the box faces.
struct NodalGradient {
  const Lattice& lat;
  const std::vector<double>& u;

  void operator()(std::size_t idx, double* out) const {
    const auto m = lat.unflatten(idx);
    const double inv = 1.0 / (2.0 * lat.h);
    for (int k = 0; k < lat.n; ++k) {
      const long lo = k == lat.n - 1 ? lat.first_layer : 0;
      const long hi = lat.count[k] - 1;
      const auto s = static_cast<std::size_t>(lat.stride[k]);
      if (m[k] == lo) {
        out[k] = (-3.0 * u[idx] + 4.0 * u[idx + s] - u[idx + 2 * s]) * inv;
      } else if (m[k] == hi) {
        out[k] = (3.0 * u[idx] - 4.0 * u[idx - s] + u[idx - 2 * s]) * inv;
      } else {
        out[k] = (u[idx + s] - u[idx - s]) * inv;
      }
    }
  }
};

}  // namespace capsym::detail
