#include "capsym/geometry.hpp"

#include <cmath>
#include <string>

#include "capsym/error.hpp"
#include "capsym/parallel.hpp"
#include "simplex.hpp"

namespace capsym {

namespace detail {

void check_not_truncated(const Lattice& lat, std::span<const double> phi, const char* what) {
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    if (phi[i] < 0.0 && lat.on_outer_face(i)) {
      const auto x = lat.position(i);
      throw TruncationError(std::string(what) + ": region reaches the outer face of the grid box near (" +
                            std::to_string(x[0]) + ", " + std::to_string(x[1]) +
                            (lat.n == 3 ? ", " + std::to_string(x[2]) : std::string()) + ")");
    }
  }
}

}  // namespace detail

namespace {

struct Sums {
  double volume = 0.0;
  double perimeter = 0.0;
  double aniso = 0.0;
  double wetting = 0.0;
};

Sums measure(const RegionSpec& region, const GaugeSpec* g, const ConeSpec& cone, const char* what) {
  region.validate();
  if (g && g->dim() != region.grid.dim) throw InputError(std::string(what) + ": gauge and grid dimensions differ");
  const Lattice lat = Lattice::make(region.grid, cone);
  const std::span<const double> phi(region.phi);
  detail::check_not_truncated(lat, phi, what);

  const int n = lat.n;
  const double h = lat.h;
  const double cell = std::pow(h, n);
  const double face = std::pow(h, n - 1);
  const auto off = detail::corner_offsets(lat);
  const auto simp = detail::simplices(n);
  const int corners = 1 << n;
  std::array<std::array<double, 3>, 8> cpos;
  for (int m = 0; m < corners; ++m) cpos[m] = detail::corner_pos(m);

  const long layers = lat.layers() - 1 - lat.first_layer;  // cell layers along x_n
  std::vector<Sums> partial(static_cast<std::size_t>(std::max(0L, layers)));
  for_chunks(partial.size(), 1, [&](std::size_t c, std::size_t, std::size_t) {
    Sums s;
    const long layer = lat.first_layer + static_cast<long>(c);
    const long ny = n == 3 ? lat.count[1] - 1 : 1;
    for (long j = 0; j < ny; ++j) {
      for (long i = 0; i + 1 < lat.count[0]; ++i) {
        const std::size_t base = n == 2 ? lat.index(i, layer) : lat.index(i, j, layer);
        double v[8];
        int neg = 0;
        for (int m = 0; m < corners; ++m) {
          v[m] = phi[base + off[m]];
          neg += v[m] < 0.0;
        }
        if (neg == 0) continue;
        if (neg == corners) {
          s.volume += cell;
        } else {
          for (const auto& sx : simp) {
            double sv[4];
            std::array<double, 3> sp[4];
            for (int a = 0; a <= n; ++a) {
              sv[a] = v[sx.corner[a]];
              sp[a] = cpos[sx.corner[a]];
            }
            const double frac = detail::negative_fraction(n, sv, sp);
            s.volume += cell * sx.weight * frac;
            double area = 0.0;
            std::array<double, 3> nu;
            if (detail::interface_piece(n, sv, sp, area, nu)) {
              // 2D pieces come from two triangulations weighted 1/2 each.
              const double w = (n == 2 ? 0.5 : 1.0) * area * face;
              s.perimeter += w;
              if (g) s.aniso += w * kernel::gauge(*g, nu.data());
            }
          }
        }
        if (lat.wall && layer == lat.first_layer) {
          if (n == 2) {
            s.wetting += h * detail::negative_fraction_1d(v[0], v[1]);
          } else {
            for (const auto& t : detail::kWallTriangles) {
              s.wetting += 0.5 * face * detail::negative_fraction_tri(v[t[0]], v[t[1]], v[t[2]]);
            }
          }
        }
      }
    }
    partial[c] = s;
  });
  Sums total;
  for (const auto& p : partial) {
    total.volume += p.volume;
    total.perimeter += p.perimeter;
    total.aniso += p.aniso;
    total.wetting += p.wetting;
  }
  return total;
}

void reject_degenerate(const RegionSpec& region, const char* what) {
  for (double v : region.phi) {
    if (v != 0.0) return;
  }
  throw InputError(std::string(what) + ": level function vanishes identically");
}

}  // namespace

double grid_volume(const RegionSpec& region, const ConeSpec& cone) {
  return measure(region, nullptr, cone, "grid_volume").volume;
}

double relative_perimeter(const RegionSpec& region, const ConeSpec& cone) {
  reject_degenerate(region, "relative_perimeter");
  return measure(region, nullptr, cone, "relative_perimeter").perimeter;
}

double wetting_perimeter(const RegionSpec& region) {
  return wetting_perimeter(region, ConeSpec::half_space(region.grid.dim));
}

double wetting_perimeter(const RegionSpec& region, const ConeSpec& cone) {
  if (cone.kind == ConeKind::full_space) {
    warn("wetting_perimeter: a full-space cone has no wall; returning 0");
    return 0.0;
  }
  return measure(region, nullptr, cone, "wetting_perimeter").wetting;
}

double anisotropic_perimeter(const RegionSpec& region, const GaugeSpec& g, const ConeSpec& cone) {
  reject_degenerate(region, "anisotropic_perimeter");
  return measure(region, &g, cone, "anisotropic_perimeter").aniso;
}

RegionMeasures measure_region(const RegionSpec& region, const GaugeSpec& g, const ConeSpec& cone) {
  reject_degenerate(region, "measure_region");
  const Sums s = measure(region, &g, cone, "measure_region");
  return {s.volume, s.perimeter, s.aniso, s.wetting};
}

IsoperimetricReport isoperimetric_check(const RegionSpec& region, const GaugeSpec& g, const ConeSpec& cone) {
  const RegionMeasures m = measure_region(region, g, cone);
  if (m.volume <= 0.0) throw InputError("isoperimetric_check: empty region");
  const int n = g.dim();
  const SectorConstants k = wulff_sector_volume(g, cone);
  IsoperimetricReport r;
  r.volume = m.volume;
  r.perimeter = m.anisotropic_perimeter;
  r.ratio = m.anisotropic_perimeter / std::pow(m.volume, (n - 1.0) / n);
  r.bound = n * std::pow(k.kappa, 1.0 / n);
  r.slack = r.ratio - r.bound;
  return r;
}

}  // namespace capsym
