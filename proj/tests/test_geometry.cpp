#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "capsym/corpus.hpp"
#include "capsym/error.hpp"
#include "capsym/geometry.hpp"

using namespace capsym;
using std::numbers::pi;

namespace {

const GridSpec grid2{2, 2.0, 1.0 / 128, ConeKind::half_space};
const GridSpec grid3{3, 1.5, 1.0 / 32, ConeKind::half_space};
const ConeSpec half2 = ConeSpec::half_space(2);

RegionSpec half_disk(const GridSpec& grid, double r, double shift = 0.0) {
  return make_region(grid, [=](std::span<const double> x) { return std::hypot(x[0] - shift, x[1]) - r; });
}

RegionSpec sector(const GridSpec& grid, double theta, double r, double shift = 0.0) {
  return corpus::wulff_sector(grid, GaugeSpec::capillary(theta, grid.dim), r, shift);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("half disk measures") {
    const auto d = half_disk(grid2, 1.0);
    const double h = grid2.spacing;
    CHECK(std::abs(grid_volume(d, half2) - pi / 2) <= 2 * h * h * 10);
    CHECK(relative_perimeter(d, half2) == doctest::Approx(pi).epsilon(0.02));
    CHECK(wetting_perimeter(d) == doctest::Approx(2.0).epsilon(0.01));
  }

  TEST_CASE("Wulff sector measures") {
    const double t = pi / 3;
    const auto s = sector(grid2, t, 1.0);
    const double kappa = t - std::sin(t) * std::cos(t);
    const auto g = GaugeSpec::capillary(t, 2);
    CHECK(grid_volume(s, half2) == doctest::Approx(kappa).epsilon(0.01));
    CHECK(relative_perimeter(s, half2) == doctest::Approx(2 * t).epsilon(0.02));
    CHECK(wetting_perimeter(s) == doctest::Approx(std::sqrt(3.0)).epsilon(0.01));
    CHECK(anisotropic_perimeter(s, g, half2) == doctest::Approx(2 * kappa).epsilon(0.02));
  }

  TEST_CASE("empty region and degenerate level function") {
    const auto empty = make_region(grid2, [](std::span<const double>) { return 1.0; });
    CHECK(grid_volume(empty, half2) == 0.0);
    const auto zero = make_region(grid2, [](std::span<const double>) { return 0.0; });
    CHECK_THROWS_AS(relative_perimeter(zero, half2), InputError);
    CHECK_THROWS_AS(isoperimetric_check(empty, GaugeSpec::capillary(1.0, 2), half2), InputError);
  }

  TEST_CASE("truncated regions are flagged") {
    const auto big = half_disk(grid2, 2.5);
    CHECK_THROWS_AS(grid_volume(big, half2), TruncationError);
  }

  TEST_CASE("interior region is not wetted") {
    const auto r = make_region(grid2, [](std::span<const double> x) { return std::hypot(x[0], x[1] - 1.0) - 0.5; });
    CHECK(wetting_perimeter(r) == 0.0);
    const ConeSpec full = ConeSpec::full_space(2);
    const GridSpec gf{2, 2.0, 1.0 / 64, ConeKind::full_space};
    const auto disk = make_region(gf, [](std::span<const double> x) { return std::hypot(x[0], x[1]) - 1.0; });
    CHECK(wetting_perimeter(disk, full) == 0.0);
    CHECK(grid_volume(disk, full) == doctest::Approx(pi).epsilon(0.002));
  }

  TEST_CASE("Euclidean anisotropic perimeter is the perimeter") {
    corpus::Rng rng(21);
    const auto e = GaugeSpec::capillary(pi / 2, 2);
    for (int k = 0; k < 5; ++k) {
      const auto r = corpus::random_blob(grid2, rng, 0.8);
      CHECK(anisotropic_perimeter(r, e, half2) == doctest::Approx(relative_perimeter(r, half2)).epsilon(1e-10));
    }
  }

  TEST_CASE("free-energy identity on random blobs") {
    corpus::Rng rng(23);
    for (double theta : {pi / 4, 2 * pi / 3}) {
      for (const GridSpec& grid : {grid2, grid3}) {
        const auto g = GaugeSpec::capillary(theta, grid.dim);
        const auto cone = ConeSpec::half_space(grid.dim);
        for (int k = 0; k < 3; ++k) {
          const auto r = corpus::random_blob(grid, rng, 0.6);
          const auto m = measure_region(r, g, cone);
          const double other = m.perimeter - std::cos(theta) * m.wetting;
          CHECK(std::abs(m.anisotropic_perimeter - other) <= 0.02 * std::max(m.anisotropic_perimeter, other));
          CHECK(m.volume == grid_volume(r, cone));
        }
      }
    }
  }

  TEST_CASE("scaling") {
    const auto g = GaugeSpec::capillary(2.0, 2);
    auto blob = [](double t) {
      return make_region(grid2, [=](std::span<const double> x) {
        const double a = std::atan2(x[1], x[0] - 0.1 * t);
        return std::hypot(x[0] - 0.1 * t, x[1]) - 0.6 * t * (1 + 0.1 * std::cos(3 * a));
      });
    };
    const auto m1 = measure_region(blob(1.0), g, half2);
    for (double t : {0.5, 2.0}) {
      const auto mt = measure_region(blob(t), g, half2);
      CHECK(mt.volume == doctest::Approx(t * t * m1.volume).epsilon(0.01));
      CHECK(mt.perimeter == doctest::Approx(t * m1.perimeter).epsilon(0.01));
      CHECK(mt.wetting == doctest::Approx(t * m1.wetting).epsilon(0.01));
      CHECK(mt.anisotropic_perimeter == doctest::Approx(t * m1.anisotropic_perimeter).epsilon(0.01));
    }
  }

  TEST_CASE("wall translation invariance") {
    const auto g = GaugeSpec::capillary(1.0, 3);
    const auto cone = ConeSpec::half_space(3);
    const auto a = measure_region(sector(grid3, 1.0, 0.8), g, cone);
    const auto b = measure_region(sector(grid3, 1.0, 0.8, 0.23), g, cone);
    CHECK(b.volume == doctest::Approx(a.volume).epsilon(0.005));
    CHECK(b.perimeter == doctest::Approx(a.perimeter).epsilon(0.01));
    CHECK(b.wetting == doctest::Approx(a.wetting).epsilon(0.01));
  }

  TEST_CASE("isoperimetric equality on Wulff sectors") {
    for (double theta : {pi / 4, pi / 3, 2 * pi / 3}) {
      const auto g = GaugeSpec::capillary(theta, 2);
      for (double shift : {0.0, 0.31}) {
        const auto rep = isoperimetric_check(sector(grid2, theta, 0.9, shift), g, half2);
        CHECK(std::abs(rep.slack) <= 0.02 * rep.bound);
        CHECK(rep.bound == doctest::Approx(2 * std::sqrt(theta - std::sin(theta) * std::cos(theta))));
      }
    }
    const auto g3 = GaugeSpec::capillary(pi / 3, 3);
    const auto rep3 = isoperimetric_check(sector(grid3, pi / 3, 1.0), g3, ConeSpec::half_space(3));
    CHECK(std::abs(rep3.slack) <= 0.02 * rep3.bound);
  }

  TEST_CASE("isoperimetric slack shrinks under refinement") {
    const double theta = 2 * pi / 3;
    const auto g = GaugeSpec::capillary(theta, 2);
    const GridSpec coarse{2, 2.0, 1.0 / 32, ConeKind::half_space};
    const GridSpec fine{2, 2.0, 1.0 / 64, ConeKind::half_space};
    const double a = std::abs(isoperimetric_check(sector(coarse, theta, 0.7), g, half2).slack);
    const double b = std::abs(isoperimetric_check(sector(fine, theta, 0.7), g, half2).slack);
    CHECK(b < a);
  }

  TEST_CASE("half disk is not a capillary Wulff sector") {
    const auto rep = isoperimetric_check(half_disk(grid2, 1.0), GaugeSpec::capillary(pi / 3, 2), half2);
    CHECK(rep.slack > 0.0);
  }

  TEST_CASE("isoperimetric inequality on random blobs") {
    corpus::Rng rng(29);
    for (double theta : {pi / 4, pi / 2, 2 * pi / 3}) {
      const auto g = GaugeSpec::capillary(theta, 2);
      for (int k = 0; k < 4; ++k) {
        const auto rep = isoperimetric_check(corpus::random_blob(grid2, rng, 0.7), g, half2);
        CHECK(rep.slack >= -0.02 * rep.bound);
      }
    }
  }
}
