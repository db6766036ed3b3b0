#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "capsym/corpus.hpp"
#include "capsym/error.hpp"
#include "capsym/geometry.hpp"
#include "capsym/rearrange.hpp"

using namespace capsym;
using std::numbers::pi;

namespace {

const GridSpec grid2{2, 2.0, 1.0 / 128, ConeKind::half_space};
const ConeSpec half2 = ConeSpec::half_space(2);

double sector_kappa(double t) { return t - std::sin(t) * std::cos(t); }

double depth(const ScalarField& u) { return *std::min_element(u.values.begin(), u.values.end()); }

double sublevel(const ScalarField& u, double t, const ConeSpec& cone) {
  RegionSpec r{u.grid, u.values};
  for (double& v : r.phi) v -= t;
  return grid_volume(r, cone);
}

// Trapezoid L^q norm over the half-space lattice.
double lq_norm(const ScalarField& u, double q) {
  const Lattice lat = Lattice::make(u.grid, ConeSpec::half_space(u.grid.dim));
  double s = 0.0;
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) s += lat.node_weight(i) * std::pow(std::abs(u.values[i]), q);
  return std::pow(s, 1.0 / q);
}

}  // namespace

TEST_SUITE("rearrange") {
  TEST_CASE("distribution of an indicator") {
    const auto u = make_field(grid2, [](std::span<const double> x) { return std::hypot(x[0], x[1]) < 1.0 ? -1.0 : 0.0; });
    const auto mu = distribution_function(u, half2);
    // the cut-cell volume of the jump sits at the half-way level
    CHECK(mu(-0.5) == doctest::Approx(pi / 2).epsilon(0.02));
    CHECK(mu(-1.0) == 0.0);
  }

  TEST_CASE("distribution of a Wulff cone") {
    const double t = pi / 3;
    const auto g = GaugeSpec::capillary(t, 2);
    const auto u = make_field(grid2, [&](std::span<const double> x) { return std::min(dual_eval(g, x) - 1.0, 0.0); });
    const auto mu = distribution_function(u, half2);
    CHECK(mu.points().back().value == doctest::Approx(sector_kappa(t)).epsilon(0.01));
    for (double s : {-0.8, -0.5, -0.2}) CHECK(mu(s) == doctest::Approx(sector_kappa(t) * (s + 1) * (s + 1)).epsilon(0.02));
  }

  TEST_CASE("zero field") {
    const ScalarField u{grid2, std::vector<double>(grid2.node_count(), 0.0)};
    const auto mu = distribution_function(u, half2);
    for (const auto& b : mu.points()) CHECK(b.value == 0.0);
  }

  TEST_CASE("positive values are rejected") {
    auto u = make_field(grid2, [](std::span<const double> x) { return std::hypot(x[0], x[1]) < 1.0 ? -1.0 : 0.0; });
    u.values[u.values.size() / 2] = 0.1;
    CHECK_THROWS_AS(distribution_function(u, half2), PreconditionError);
    CHECK_THROWS_AS(increasing_rearrangement(MonotoneProfile{}), InputError);
    CHECK_THROWS_AS(increasing_rearrangement(MonotoneProfile::from_pairs({-1.0, 0.0}, {0.5, 1.0})), PreconditionError);
  }

  TEST_CASE("rearrangement of a two-level distribution") {
    const double v = 1.3;
    const MonotoneProfile mu({{-1.0, 0.0, v}, {0.0, v, v}}, Interpolation::linear);
    const auto us = increasing_rearrangement(mu);
    CHECK(us(0.5 * v) == doctest::Approx(-1.0));
    CHECK(us(v) == doctest::Approx(-1.0));
    CHECK(us(v + 0.1) == doctest::Approx(0.0));
  }

  TEST_CASE("rearrangement inverts a power law") {
    const double kappa = 0.7;
    std::vector<double> t, m;
    for (int k = 0; k <= 400; ++k) {
      t.push_back(-1.0 + k / 400.0);
      m.push_back(kappa * std::pow(t.back() + 1, 2));
    }
    const auto us = increasing_rearrangement(MonotoneProfile::from_pairs(t, m));
    for (double s : {0.05, 0.2, 0.5, 0.69}) CHECK(us(s) == doctest::Approx(std::sqrt(s / kappa) - 1).epsilon(1e-3));
  }

  TEST_CASE("radial fields are fixed points") {
    for (double theta : {pi / 3, 2 * pi / 3}) {
      const auto g = GaugeSpec::capillary(theta, 2);
      const auto u = make_field(grid2, [&](std::span<const double> x) {
        const double r = dual_eval(g, x);
        return r < 1.0 ? 0.5 * (r * r - 1.0) : 0.0;
      });
      const auto us = capillary_symmetrize(u, theta);
      double err = 0.0;
      for (std::size_t i = 0; i < u.values.size(); ++i) err = std::max(err, std::abs(us.values[i] - u.values[i]));
      CHECK(err <= 0.01 * 0.5);
    }
  }

  TEST_CASE("translated sector indicator becomes the centred sector") {
    const double theta = 2 * pi / 3;
    const auto g = GaugeSpec::capillary(theta, 2);
    const auto region = corpus::wulff_sector(grid2, g, 0.6, 0.4);
    ScalarField u{grid2, std::vector<double>(grid2.node_count())};
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] = region.phi[i] < 0 ? -1.0 : 0.0;
    const auto us = capillary_symmetrize(u, theta);
    const auto centred = corpus::wulff_sector(grid2, g, 0.6);
    std::size_t mismatched = 0, inside = 0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      if (std::abs(centred.phi[i]) < 3 * grid2.spacing) continue;
      inside += centred.phi[i] < 0;
      mismatched += (centred.phi[i] < 0) != (us.values[i] < -0.5);
    }
    CHECK(inside > 1000);
    CHECK(mismatched == 0);
  }

  TEST_CASE("Euclidean symmetrization recentres a shifted half disk") {
    const auto u = make_field(grid2, [](std::span<const double> x) { return std::hypot(x[0] - 0.5, x[1]) < 1.0 ? -1.0 : 0.0; });
    const auto s = symmetrize(u, GaugeSpec::euclidean(2), half2);
    // radius of the symmetrized support from its volume
    CHECK(std::sqrt(2 * s.mu.points().back().value / pi) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s.kappa == doctest::Approx(pi / 2));
    const auto e = capillary_symmetrize(u, pi / 2);
    CHECK(e.values == s.field.values);
  }

  TEST_CASE("wall translation does not change the output") {
    corpus::Rng rng(31);
    const auto u = corpus::random_bumps(grid2, rng, 3, 0.5);
    const long shift = 20;
    ScalarField v = u;
    const Lattice lat = Lattice::make(grid2, half2);
    std::fill(v.values.begin(), v.values.end(), 0.0);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      const auto m = lat.unflatten(i);
      if (m[0] + shift < lat.count[0]) v.values[lat.index(m[0] + shift, m[1])] = u.values[i];
    }
    REQUIRE(std::abs(depth(v) - depth(u)) < 1e-15);
    const auto a = capillary_symmetrize(u, 1.0), b = capillary_symmetrize(v, 1.0);
    double err = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) err = std::max(err, std::abs(a.values[i] - b.values[i]));
    CHECK(err <= 0.01 * std::abs(depth(u)));
  }

  TEST_CASE("equimeasurability, norms, idempotence and shape on random fields") {
    corpus::Rng rng(37);
    for (double theta : {pi / 4, pi / 2, 2 * pi / 3}) {
      const auto g = GaugeSpec::capillary(theta, 2);
      for (int k = 0; k < 2; ++k) {
        const auto u = corpus::random_bumps(grid2, rng, 3, 0.6);
        const auto s = symmetrize(u, g, half2);
        const double d = depth(u);
        std::uniform_real_distribution<double> ut(0.95 * d, 0.05 * d);
        for (int j = 0; j < 10; ++j) {
          const double t = ut(rng);
          const double a = sublevel(u, t, half2);
          CHECK(std::abs(sublevel(s.field, t, half2) - a) <= 0.01 * a);
          RegionSpec level{grid2, s.field.values};
          for (double& v : level.phi) v -= t;
          const auto iso = isoperimetric_check(level, g, half2);
          CHECK(std::abs(iso.slack) <= 0.02 * iso.bound);
        }
        CHECK(depth(s.field) == doctest::Approx(d).epsilon(0.01));
        for (double q : {1.0, 2.0}) CHECK(lq_norm(s.field, q) == doctest::Approx(lq_norm(u, q)).epsilon(0.01));
        const auto twice = convex_symmetrize(s.field, g, half2);
        double err = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i) err = std::max(err, std::abs(twice.values[i] - s.field.values[i]));
        CHECK(err <= 0.01 * std::abs(d));
      }
    }
  }

  TEST_CASE("symmetrized field depends only on the dual gauge") {
    corpus::Rng rng(41);
    const double theta = 1.1;
    const auto g = GaugeSpec::capillary(theta, 2);
    const auto u = corpus::random_bumps(grid2, rng, 2, 0.7);
    const auto us = capillary_symmetrize(u, theta);
    const auto prof = symmetrize(u, g, half2).rearranged;
    const double kappa = sector_kappa(theta);
    const Lattice lat = Lattice::make(grid2, half2);
    double err = 0.0;
    for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
      const auto p = lat.position(i);
      const double r = dual_eval(g, std::vector{p[0], p[1]});
      err = std::max(err, std::abs(us.values[i] - prof(kappa * r * r)));
    }
    CHECK(err <= 1e-12);
    // nodes adjacent in the F° ordering carry nearly equal values, wherever they sit
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
      const auto p = lat.position(i);
      const double r = dual_eval(g, std::vector{p[0], p[1]});
      if (r < 0.8) order.emplace_back(r, i);
    }
    std::sort(order.begin(), order.end());
    int pairs = 0;
    double gap = 0.0;
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (order[k].first - order[k - 1].first > 1e-4) continue;
      ++pairs;
      gap = std::max(gap, std::abs(us.values[order[k].second] - us.values[order[k - 1].second]));
    }
    CHECK(pairs > 1000);
    CHECK(gap <= 0.01 * std::abs(depth(u)));
  }

  TEST_CASE("rearranged source of a constant and a two-valued field") {
    const auto omega = make_region(grid2, [](std::span<const double> x) { return std::hypot(x[0], x[1]) - 1.0; });
    ScalarField f{grid2, std::vector<double>(grid2.node_count(), 0.0)};
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = omega.phi[i] < 0 ? -2.0 : 0.0;
    const auto fs = rearranged_source(f, half2);
    CHECK(fs(0.5) == -2.0);
    CHECK(fs(1.5) == -2.0);
    CHECK(fs(1.7) == 0.0);
    ScalarField f2 = f;
    for (std::size_t i = 0; i < f2.values.size(); ++i) {
      const auto x = Lattice::make(grid2, half2).position(i);
      if (f2.values[i] < 0 && x[0] > 0) f2.values[i] = -1.0;
    }
    const auto fs2 = rearranged_source(f2, half2);
    CHECK(fs2(0.7) == -2.0);
    CHECK(fs2(0.85) == -1.0);
    CHECK(fs2(1.5) == -1.0);
  }

  TEST_CASE("Hardy-Littlewood inequality on random pairs") {
    corpus::Rng rng(43);
    const Lattice lat = Lattice::make(grid2, half2);
    for (int k = 0; k < 4; ++k) {
      const auto u = corpus::random_bumps(grid2, rng, 2, 0.6);
      const auto v = corpus::random_bumps(grid2, rng, 3, 0.6);
      ScalarField f = v;
      for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = u.values[i] < 0 ? v.values[i] - 0.5 : 0.0;
      const auto fs = rearranged_source(f, half2);
      const auto mu = distribution_function(u, half2);
      const double d = depth(u);
      for (int j = 1; j <= 10; ++j) {
        const double t = d * (0.95 - 0.09 * j);
        // node quadrature of -f over {u < t}
        double lhs = 0.0;
        for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
          if (u.values[i] < t) lhs -= lat.node_weight(i) * f.values[i];
        }
        const double rhs = -fs.integral(0.0, mu(t));
        CHECK(lhs <= rhs * 1.01 + 1e-12);
      }
    }
  }
}
