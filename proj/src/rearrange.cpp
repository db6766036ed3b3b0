#include "capsym/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "capsym/error.hpp"
#include "capsym/parallel.hpp"
#include "simplex.hpp"

namespace capsym {

namespace {

void require_non_positive(const ScalarField& u, const Lattice& lat, const char* what) {
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    if (u.values[i] > 0.0) {
      throw PreconditionError(std::string(what) +
                              ": field has positive values; only non-positive functions (the regime of "
                              "non-positive solutions of the mixed problem) can be rearranged");
    }
  }
}

}  // namespace

MonotoneProfile distribution_function(const ScalarField& u, const ConeSpec& cone, int levels) {
  u.validate();
  if (levels < 2) throw InputError("distribution_function: levels must be at least 2");
  const Lattice lat = Lattice::make(u.grid, cone);
  require_non_positive(u, lat, "distribution_function");
  const std::span<const double> val(u.values);
  detail::check_not_truncated(lat, val, "distribution_function");

  double umin = 0.0;
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) umin = std::min(umin, val[i]);
  const std::size_t L = static_cast<std::size_t>(levels);
  std::vector<double> t(L);
  const double lo = umin < 0.0 ? umin : -1.0;
  for (std::size_t k = 0; k < L; ++k) t[k] = lo + (0.0 - lo) * static_cast<double>(k) / static_cast<double>(L - 1);
  t[L - 1] = 0.0;
  if (umin == 0.0) return MonotoneProfile::from_pairs(t, std::vector<double>(L, 0.0));

  const int n = lat.n;
  const double cell = std::pow(lat.h, n);
  const auto off = detail::corner_offsets(lat);
  const auto simp = detail::simplices(n);
  const int corners = 1 << n;
  std::array<std::array<double, 3>, 8> cpos;
  for (int m = 0; m < corners; ++m) cpos[m] = detail::corner_pos(m);
  const double dt = t[1] - t[0];

  // First threshold index k with t[k] > v (L if none).
  auto first_above = [&](double v) {
    long k = static_cast<long>(std::floor((v - lo) / dt)) + 1;
    k = std::clamp(k, 0L, static_cast<long>(L));
    while (k > 0 && t[k - 1] > v) --k;
    while (k < static_cast<long>(L) && t[k] <= v) ++k;
    return static_cast<std::size_t>(k);
  };

  const long layers = lat.layers() - 1 - lat.first_layer;
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(std::max(0L, layers)));
  for_chunks(partial.size(), 1, [&](std::size_t c, std::size_t, std::size_t) {
    std::vector<double> direct(L + 1, 0.0);  // slot L collects simplices never fully below any threshold
    std::vector<double> jump(L + 1, 0.0);
    const long layer = lat.first_layer + static_cast<long>(c);
    const long ny = n == 3 ? lat.count[1] - 1 : 1;
    for (long j = 0; j < ny; ++j) {
      for (long i = 0; i + 1 < lat.count[0]; ++i) {
        const std::size_t base = n == 2 ? lat.index(i, layer) : lat.index(i, j, layer);
        double v[8];
        double cmin = 0.0;
        for (int m = 0; m < corners; ++m) {
          v[m] = val[base + off[m]];
          cmin = std::min(cmin, v[m]);
        }
        if (cmin == 0.0) continue;  // {u < t} never meets this cell for t <= 0
        for (const auto& sx : simp) {
          double sv[4];
          std::array<double, 3> sp[4];
          double smin = 0.0, smax = -std::numeric_limits<double>::infinity();
          for (int a = 0; a <= n; ++a) {
            sv[a] = v[sx.corner[a]];
            sp[a] = cpos[sx.corner[a]];
            smin = std::min(smin, sv[a]);
            smax = std::max(smax, sv[a]);
          }
          const double vol = cell * sx.weight;
          const std::size_t k_full = first_above(smax);
          jump[k_full] += vol;
          for (std::size_t k = first_above(smin); k < k_full; ++k) {
            double shifted[4];
            for (int a = 0; a <= n; ++a) shifted[a] = sv[a] - t[k];
            direct[k] += vol * detail::negative_fraction(n, shifted, sp);
          }
        }
      }
    }
    // Fold jumps into a running sum.
    double run = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
      run += jump[k];
      direct[k] += run;
    }
    direct.resize(L);
    partial[c] = std::move(direct);
  });

  std::vector<double> mu(L, 0.0);
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < L; ++k) mu[k] += p[k];
  }
  for (std::size_t k = 1; k < L; ++k) mu[k] = std::max(mu[k], mu[k - 1]);
  return MonotoneProfile::from_pairs(t, mu);
}

MonotoneProfile increasing_rearrangement(const MonotoneProfile& mu) {
  if (mu.empty()) throw InputError("increasing_rearrangement: empty profile");
  if (mu.points().front().value != 0.0) {
    throw PreconditionError("increasing_rearrangement: mu must start from 0 (mu(-inf) = 0)");
  }
  // Vertices of the graph of mu, transposed to (s, t).
  struct Vertex {
    double s;
    double t;
  };
  std::vector<Vertex> vs;
  vs.reserve(2 * mu.size());
  for (const auto& p : mu.points()) {
    vs.push_back({p.value, p.arg});
    if (p.right != p.value) vs.push_back({p.right, p.arg});
  }
  std::vector<Breakpoint> out;
  for (std::size_t k = 0; k < vs.size();) {
    std::size_t e = k;
    while (e + 1 < vs.size() && vs[e + 1].s == vs[k].s) ++e;
    out.push_back({vs[k].s, vs[k].t, vs[e].t});
    k = e + 1;
  }
  return MonotoneProfile(std::move(out), Interpolation::linear);
}

ScalarField radial_field(const MonotoneProfile& profile, const GaugeSpec& g, const ConeSpec& cone,
                         const GridSpec& grid) {
  const Lattice lat = Lattice::make(grid, cone);
  if (g.dim() != grid.dim) throw InputError("radial_field: gauge and grid dimensions differ");
  const double kappa = wulff_sector_volume(g, cone).kappa;
  const int n = lat.n;
  ScalarField out{grid, std::vector<double>(grid.node_count(), 0.0)};
  const std::size_t b = lat.node_begin();
  for_chunks(lat.node_end() - b, 4096, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = b + lo; i < b + hi; ++i) {
      const auto x = lat.position(i);
      const double rho = kernel::dual(g, x.data());
      out.values[i] = profile(kappa * std::pow(rho, n));
    }
  });
  return out;
}

Symmetrization symmetrize(const ScalarField& u, const GaugeSpec& g, const ConeSpec& cone, int levels) {
  if (g.dim() != u.grid.dim) throw InputError("symmetrize: gauge and grid dimensions differ");
  Symmetrization s;
  s.mu = distribution_function(u, cone, levels);
  s.rearranged = increasing_rearrangement(s.mu);
  s.kappa = wulff_sector_volume(g, cone).kappa;
  s.field = radial_field(s.rearranged, g, cone, u.grid);
  return s;
}

ScalarField convex_symmetrize(const ScalarField& u, const GaugeSpec& g, const ConeSpec& cone, int levels) {
  return symmetrize(u, g, cone, levels).field;
}

ScalarField capillary_symmetrize(const ScalarField& u, double theta, int levels) {
  const GaugeSpec g = GaugeSpec::capillary(theta, u.grid.dim);
  return convex_symmetrize(u, g, ConeSpec::half_space(u.grid.dim), levels);
}

MonotoneProfile rearranged_source(const ScalarField& f, const ConeSpec& cone) {
  f.validate();
  const Lattice lat = Lattice::make(f.grid, cone);
  require_non_positive(f, lat, "rearranged_source");
  detail::check_not_truncated(lat, f.values, "rearranged_source");
  std::vector<std::size_t> order;
  order.reserve(lat.node_end() - lat.node_begin());
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return f.values[a] < f.values[b]; });
  std::vector<double> args, vals;
  double cum = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double v = f.values[order[k]];
    cum += lat.node_weight(order[k]);
    if (k + 1 == order.size() || f.values[order[k + 1]] != v) {
      if (!args.empty() && cum <= args.back()) continue;
      args.push_back(cum);
      vals.push_back(v);
    }
  }
  return MonotoneProfile::from_pairs(args, vals, Interpolation::step);
}

}  // namespace capsym
