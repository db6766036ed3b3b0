#include "capsym/corpus.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace capsym::corpus {

namespace {

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

std::array<double, 3> random_unit(Rng& rng, int n) {
  std::normal_distribution<double> normal;
  std::array<double, 3> d{0, 0, 0};
  double s = 0.0;
  do {
    s = 0.0;
    for (int k = 0; k < n; ++k) {
      d[k] = normal(rng);
      s += d[k] * d[k];
    }
  } while (s < 1e-12);
  for (int k = 0; k < n; ++k) d[k] /= std::sqrt(s);
  return d;
}

}  // namespace

RegionSpec random_blob(const GridSpec& grid, Rng& rng, double r0) {
  const int n = grid.dim;
  struct Mode {
    std::array<double, 3> dir;
    double freq, amp, phase;
  };
  std::vector<Mode> modes;
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    Mode m{random_unit(rng, n), static_cast<double>(k + 2), uniform(rng, -0.08, 0.08),
           uniform(rng, 0.0, 2 * std::numbers::pi)};
    total += std::abs(m.amp);
    modes.push_back(m);
  }
  const double reach = r0 * (1.0 + total);
  std::array<double, 3> c{0, 0, 0};
  const double room = std::max(0.0, 0.8 * grid.half_extent - reach);
  for (int k = 0; k < n - 1; ++k) c[k] = uniform(rng, -room, room);
  c[n - 1] = uniform(rng, -0.4, 0.4) * r0;
  return make_region(grid, [=](std::span<const double> x) {
    double d[3] = {0, 0, 0}, r2 = 0.0;
    for (int k = 0; k < n; ++k) {
      d[k] = x[k] - c[k];
      r2 += d[k] * d[k];
    }
    const double r = std::sqrt(r2);
    double R = 1.0;
    if (r > 0.0) {
      for (const auto& m : modes) {
        if (n == 2) {
          R += m.amp * std::cos(m.freq * std::atan2(d[1], d[0]) + m.phase);
        } else {
          double dot = 0.0;
          for (int k = 0; k < n; ++k) dot += m.dir[k] * d[k] / r;
          R += m.amp * std::cos(m.freq * dot + m.phase);
        }
      }
    }
    return r - r0 * R;
  });
}

RegionSpec wulff_sector(const GridSpec& grid, const GaugeSpec& g, double r, double shift) {
  return make_region(grid, [&](std::span<const double> x) {
    double y[3] = {x[0] - shift, x[1], grid.dim == 3 ? x[2] : 0.0};
    return kernel::dual(g, y) - r;
  });
}

ScalarField random_bumps(const GridSpec& grid, Rng& rng, int count, double max_radius) {
  const int n = grid.dim;
  struct Bump {
    std::array<double, 3> c;
    std::array<double, 9> A;
    double amp;
  };
  std::vector<Bump> bumps;
  for (int b = 0; b < count; ++b) {
    // Orthonormal frame by Gram-Schmidt, then semi-axes in [0.4, 1] max_radius.
    std::array<std::array<double, 3>, 3> Q{};
    for (int i = 0; i < n; ++i) {
      Q[i] = random_unit(rng, n);
      for (int j = 0; j < i; ++j) {
        double dot = 0.0;
        for (int k = 0; k < n; ++k) dot += Q[i][k] * Q[j][k];
        for (int k = 0; k < n; ++k) Q[i][k] -= dot * Q[j][k];
      }
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += Q[i][k] * Q[i][k];
      for (int k = 0; k < n; ++k) Q[i][k] /= std::sqrt(s);
    }
    Bump bp{};
    for (int i = 0; i < n; ++i) {
      const double inv = 1.0 / (uniform(rng, 0.4, 1.0) * max_radius);
      for (int k = 0; k < n; ++k) bp.A[i * 3 + k] = inv * Q[i][k];
    }
    const double room = std::max(0.0, 0.9 * grid.half_extent - max_radius);
    for (int k = 0; k < n - 1; ++k) bp.c[k] = uniform(rng, -room, room) * 0.5;
    bp.c[n - 1] = uniform(rng, 0.0, std::min(room, 0.6 * max_radius));
    bp.amp = uniform(rng, 0.5, 1.5);
    bumps.push_back(bp);
  }
  return make_field(grid, [&](std::span<const double> x) {
    double u = 0.0;
    for (const auto& bp : bumps) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        double y = 0.0;
        for (int k = 0; k < n; ++k) y += bp.A[i * 3 + k] * (x[k] - bp.c[k]);
        s += y * y;
      }
      if (s < 1.0) u -= bp.amp * (1.0 - s) * (1.0 - s);
    }
    return u;
  });
}

ScalarField random_coefficient(const GridSpec& grid, Rng& rng, double amp) {
  const int n = grid.dim;
  const auto k = random_unit(rng, n);
  const double freq = uniform(rng, 1.0, 3.0), phase = uniform(rng, 0.0, 2 * std::numbers::pi);
  return make_field(grid, [=](std::span<const double> x) {
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += k[i] * x[i];
    return amp * (1.0 + std::sin(freq * dot + phase));
  });
}

}  // namespace capsym::corpus
