#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "capsym/corpus.hpp"
#include "capsym/energy.hpp"
#include "capsym/error.hpp"
#include "capsym/geometry.hpp"
#include "capsym/pde.hpp"

using namespace capsym;
using std::numbers::pi;

namespace {

const GridSpec grid2{2, 1.5, 1.0 / 128, ConeKind::half_space};
const GridSpec coarse2{2, 1.5, 1.0 / 64, ConeKind::half_space};
const ConeSpec half2 = ConeSpec::half_space(2);

double sector_kappa(double t) { return t - std::sin(t) * std::cos(t); }

double max_abs(const ScalarField& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

MixedBVP sector_problem(const GridSpec& grid, double theta, double r, double f, double shift = 0.0) {
  const auto g = GaugeSpec::capillary(theta, grid.dim);
  return MixedBVP::constant_source(corpus::wulff_sector(grid, g, r, shift), f, g);
}

}  // namespace

TEST_SUITE("pde") {
  TEST_CASE("problem validation") {
    auto pb = sector_problem(coarse2, 1.0, 0.8, -2.0);
    CHECK_NOTHROW(pb.validate());
    auto pos = sector_problem(coarse2, 1.0, 0.8, 1.0);
    CHECK_THROWS_AS(pos.validate(), PreconditionError);
    CHECK_THROWS_AS(solve_mixed(pos), PreconditionError);
    auto full = pb;
    full.cone = ConeSpec::full_space(2);
    CHECK_THROWS_AS(full.validate(), UnsupportedDomainError);
    const auto floating = make_region(coarse2, [](std::span<const double> x) { return std::hypot(x[0], x[1] - 0.8) - 0.4; });
    CHECK_THROWS_AS(MixedBVP::constant_source(floating, -2.0, GaugeSpec::capillary(1.0, 2)).validate(), InputError);
    auto neg = pb;
    neg.flux = OperatorSpec::scaled({coarse2, std::vector<double>(coarse2.node_count(), -0.5)});
    CHECK_THROWS_AS(neg.validate(), InputError);
    SolverOptions tight;
    tight.max_iterations = 1;
    CHECK_THROWS_AS(solve_mixed(pb, tight), NumericError);
  }

  TEST_CASE("zero source gives the zero solution") {
    const auto sol = solve_mixed(sector_problem(coarse2, 1.0, 0.8, 0.0));
    CHECK(max_abs(sol.u) == 0.0);
  }

  TEST_CASE("explicit solution on the Wulff sector") {
    const double theta = pi / 3;
    const auto sol = solve_mixed(sector_problem(grid2, theta, 1.0, -2.0));
    const auto exact = explicit_radial_solution(theta, 1.0, grid2);
    CHECK(max_diff(sol.u, exact) <= 0.03 * max_abs(exact));
    const auto solc = solve_mixed(sector_problem(coarse2, theta, 1.0, -2.0));
    const auto exactc = explicit_radial_solution(theta, 1.0, coarse2);
    CHECK(max_diff(solc.u, exactc) >= 1.5 * max_diff(sol.u, exact));
  }

  TEST_CASE("classical Poisson solution on the half disk") {
    const auto g = GaugeSpec::euclidean(2);
    const auto disk = make_region(grid2, [](std::span<const double> x) { return std::hypot(x[0], x[1]) - 1.0; });
    const auto sol = solve_mixed(MixedBVP::constant_source(disk, -2.0, g));
    const auto exact = make_field(grid2, [](std::span<const double> x) {
      const double r2 = x[0] * x[0] + x[1] * x[1];
      return r2 < 1.0 ? 0.5 * (r2 - 1.0) : 0.0;
    });
    CHECK(max_diff(sol.u, exact) <= 0.03 * 0.5);
  }

  TEST_CASE("non-positivity, energy decrease and the natural boundary condition") {
    corpus::Rng rng(71);
    for (int k = 0; k < 4; ++k) {
      const double theta = 0.7 + 0.55 * k;
      const auto g = GaugeSpec::capillary(theta, 2);
      const auto region = corpus::random_blob(grid2, rng, 0.6);
      auto pb = MixedBVP::constant_source(region, -2.0, g);
      if (k % 2) pb.flux = OperatorSpec::scaled(corpus::random_coefficient(grid2, rng, 0.5));
      const auto sol = solve_mixed(pb);
      CHECK(*std::max_element(sol.u.values.begin(), sol.u.values.end()) <= 1e-12);
      for (std::size_t i = 1; i < sol.energy_history.size(); ++i) {
        CHECK(sol.energy_history[i] <= sol.energy_history[i - 1]);
      }
      CHECK(sol.residual <= 1e-6);
      if (k % 2 == 0) {
        const double flux = wall_conormal_flux(sol.u, g, region);
        CHECK(flux <= 2.0 * grid2.spacing * max_abs(sol.u) / 0.6 + 0.02);
      }
    }
  }

  TEST_CASE("co-normal flux shrinks under refinement") {
    const double theta = 2.0;
    const auto g = GaugeSpec::capillary(theta, 2);
    auto flux_at = [&](const GridSpec& grid) {
      const auto pb = sector_problem(grid, theta, 0.6, -2.0, 0.1);
      return wall_conormal_flux(solve_mixed(pb).u, g, pb.region);
    };
    CHECK(flux_at(grid2) < flux_at(coarse2));
  }

  TEST_CASE("ellipticity") {
    corpus::Rng rng(73);
    for (double theta : {0.5, 2.5}) {
      const auto g = GaugeSpec::capillary(theta, 2);
      CHECK(ellipticity_margin(OperatorSpec::gauge(), g, coarse2) == doctest::Approx(1.0).epsilon(1e-12));
      const auto op = OperatorSpec::scaled(corpus::random_coefficient(coarse2, rng, 0.5));
      CHECK(ellipticity_margin(op, g, coarse2) >= 1.0);
    }
  }

  TEST_CASE("radial profile formula") {
    const int n = 2;
    const double kappa = sector_kappa(1.0), r = 0.9, vol = kappa * r * r;
    const auto fs = MonotoneProfile::from_pairs({0.0, vol}, {-2.0, -2.0}, Interpolation::step);
    const auto z = radial_profile_solution(fs, vol, n, kappa);
    for (double s : {0.0, 0.1 * vol, 0.5 * vol, 0.9 * vol}) {
      CHECK(z(s) == doctest::Approx(0.5 * (s / kappa - vol / kappa)).epsilon(1e-10));
    }
    CHECK(z(vol) == 0.0);
    const auto z0 = radial_profile_solution(MonotoneProfile::from_pairs({0.0, vol}, {0.0, 0.0}), vol, n, kappa);
    for (const auto& b : z0.points()) CHECK(b.value == 0.0);
    CHECK_THROWS_AS(radial_profile_solution(fs, 0.0, n, kappa), InputError);
    // n = 3 with the power 2/3
    const double k3 = 1.3, vol3 = 0.8;
    const auto f3 = MonotoneProfile::from_pairs({0.0, vol3}, {-3.0, -3.0}, Interpolation::step);
    const auto z3 = radial_profile_solution(f3, vol3, 3, k3);
    for (const auto& b : z3.points()) {
      const double s = b.arg;
      CHECK(b.value == doctest::Approx(0.5 * (std::cbrt(s * s / (k3 * k3)) - std::cbrt(vol3 * vol3 / (k3 * k3)))).epsilon(1e-10));
    }
  }

  TEST_CASE("explicit radial solution and the discrete operator") {
    const double theta = pi / 3;
    const auto u = explicit_radial_solution(theta, 1.0, grid2);
    const Lattice lat = Lattice::make(grid2, half2);
    CHECK(u.values[lat.index(lat.count[0] / 2, 0)] == doctest::Approx(-0.5));
    CHECK_THROWS_AS(explicit_radial_solution(theta, 2.0, grid2), TruncationError);
    const auto g = GaugeSpec::capillary(theta, 2);
    const auto lap = anisotropic_laplacian(u, g, half2);
    double worst = 0.0;
    int checked = 0;
    for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
      const auto p = lat.position(i);
      const double rho = dual_eval(g, std::vector{p[0], p[1]});
      if (rho < 0.1 || rho > 0.95 || p[1] < 2 * grid2.spacing) continue;
      // -div a(grad u) = f with f = -2
      worst = std::max(worst, std::abs(-lap.values[i] + 2.0));
      ++checked;
    }
    CHECK(checked > 1000);
    CHECK(worst <= 20 * grid2.spacing);
    // boundary value: nodes just outside the sector are exactly 0
    for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
      const auto p = lat.position(i);
      if (dual_eval(g, std::vector{p[0], p[1]}) >= 1.0) CHECK(u.values[i] == 0.0);
    }
  }

  TEST_CASE("comparison on the symmetric problem is an equality") {
    const double theta = 2 * pi / 3;
    const auto rep = talenti_compare(sector_problem(grid2, theta, 0.6, -2.0));
    CHECK(rep.violations == 0);
    CHECK(max_diff(rep.u_star, rep.z) <= 0.03 * rep.z_linf);
    CHECK(rep.profile_mismatch <= 0.03);
    CHECK(rep.star_radius == doctest::Approx(0.6).epsilon(0.01));
    const auto shifted = talenti_compare(sector_problem(grid2, theta, 0.6, -2.0, 0.35));
    CHECK(shifted.violations == 0);
    CHECK(max_diff(shifted.u_star, shifted.z) <= 0.03 * shifted.z_linf);
  }

  TEST_CASE("comparison with the scaled flux has positive slack") {
    corpus::Rng rng(79);
    const auto g = GaugeSpec::capillary(1.2, 2);
    const auto region = corpus::random_blob(grid2, rng, 0.6);
    auto pb = MixedBVP::constant_source(region, -2.0, g);
    pb.flux = OperatorSpec::scaled({grid2, std::vector<double>(grid2.node_count(), 1.0)});
    const auto rep = talenti_compare(pb);
    CHECK(rep.violations == 0);
    CHECK(rep.min_slack >= -0.03 * rep.z_linf);
    CHECK(rep.mean_slack > 0.0);
  }

  TEST_CASE("comparison on random problems") {
    corpus::Rng rng(83);
    for (int k = 0; k < 3; ++k) {
      const auto g = GaugeSpec::capillary(0.8 + 0.7 * k, 2);
      auto pb = MixedBVP::constant_source(corpus::random_blob(coarse2, rng, 0.6), -2.0, g);
      const auto b = corpus::random_bumps(coarse2, rng, 2, 0.5);
      for (std::size_t i = 0; i < b.values.size(); ++i) pb.source.values[i] = -1.0 + b.values[i];
      const auto rep = talenti_compare(pb);
      CHECK(rep.violations == 0);
    }
  }

  TEST_CASE("L-infinity bound") {
    const double theta = pi / 3;
    const auto sector = sector_problem(grid2, theta, 1.0, -2.0);
    const auto rep = linfty_bound_check(sector);
    CHECK(rep.bound == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(rep.linf == doctest::Approx(0.5).epsilon(0.03));
    CHECK(rep.respected);
    CHECK(rep.tight);
    // half of the sector
    auto half = sector;
    for (std::size_t i = 0; i < half.region.phi.size(); ++i) {
      if (Lattice::make(grid2, half2).position(i)[0] > 0.0) half.region.phi[i] = std::max(half.region.phi[i], 0.5);
    }
    const auto hr = linfty_bound_check(half);
    CHECK(hr.linf < hr.bound);
    CHECK_FALSE(hr.tight);
    const auto small = linfty_bound_check(sector_problem(grid2, theta, 0.5, -2.0));
    CHECK(small.bound == doctest::Approx(0.25 * rep.bound).epsilon(1e-2));
    CHECK_THROWS_AS(linfty_bound_check(sector_problem(grid2, theta, 1.0, -1.0)), PreconditionError);
  }

  TEST_CASE("level-set bounds along the solution") {
    // Psi'(t) <= n mu(t) and n^2 kappa^(2/n) <= mu^(2/n - 2) mu' Psi'
    const double theta = 1.1;
    const auto g = GaugeSpec::capillary(theta, 2);
    corpus::Rng rng(89);
    const auto pb = MixedBVP::constant_source(corpus::random_blob(grid2, rng, 0.6), -2.0, g);
    const auto u = solve_mixed(pb).u;
    const int levels = 64;
    const auto mu = distribution_function(u, half2, levels);
    const auto psi = energy_profile(u, g, half2, levels);
    const double kappa = sector_kappa(theta);
    const auto& mp = mu.points();
    const auto& pp = psi.points();
    for (int k = 8; k < levels - 8; k += 6) {
      const double dt = mp[k + 4].arg - mp[k - 4].arg;
      const double dmu = (mp[k + 4].value - mp[k - 4].value) / dt;
      const double dpsi = (pp[k + 4].value - pp[k - 4].value) / dt;
      const double m = mp[k].value;
      CHECK(dpsi <= 2.0 * m * 1.05);
      CHECK(4.0 * kappa * m <= dmu * dpsi * 1.05);
    }
  }
}
