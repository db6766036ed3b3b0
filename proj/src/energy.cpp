#include "capsym/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "capsym/error.hpp"
#include "capsym/parallel.hpp"
#include "stencil.hpp"

namespace capsym {

namespace {

constexpr std::size_t kChunk = 4096;

void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("energy exponent p must be finite and >= 1");
}

using Gradient = detail::NodalGradient;

Lattice energy_lattice(const ScalarField& u, const ConeSpec& cone) {
  u.validate();
  const Lattice lat = Lattice::make(u.grid, cone);
  for (int k = 0; k < lat.n; ++k) {
    const long lo = k == lat.n - 1 ? lat.first_layer : 0;
    if (lat.count[k] - lo < 3) throw InputError("energy stencils need at least 3 nodes per axis");
  }
  return lat;
}

double integrate_nodes(const Lattice& lat, const std::function<double(std::size_t)>& density) {
  const std::size_t b = lat.node_begin();
  return chunked_sum(lat.node_end() - b, kChunk, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = b + lo; i < b + hi; ++i) s += lat.node_weight(i) * density(i);
    return s;
  });
}

double power(double v, double p) { return p == 1.0 ? v : std::pow(v, p); }

// ---- radial quadrature for the Sobolev extremal ----

struct RadialModel {
  int n;
  double p;
  double pp;  // p' = p / (p - 1)

  // log(sigma + rho^p'), stable for large rho.
  double log_base(double sigma, double rho) const {
    if (rho <= 0.0) return std::log(sigma);
    const double lr = pp * std::log(rho);
    if (lr > std::log(sigma)) return lr + std::log1p(sigma * std::exp(-lr));
    return std::log(sigma) + std::log1p(std::exp(lr) / sigma);
  }
  // rho^(n-1) (sigma + rho^p')^(-n), the L^q density of U.
  double norm_density(double sigma, double rho) const {
    if (rho <= 0.0) return 0.0;
    return std::exp((n - 1) * std::log(rho) - n * log_base(sigma, rho));
  }
  // F(grad U)^p rho^(n-1) = a^p rho^(p'+n-1) (sigma + rho^p')^(-n).
  double energy_density(double sigma, double rho) const {
    if (rho <= 0.0) return 0.0;
    const double a = (n - p) / (p - 1.0);
    return std::exp(p * std::log(a) + (pp + n - 1) * std::log(rho) - n * log_base(sigma, rho));
  }
  // Power of rho in the far field of each density, both < -1.
  double norm_decay() const { return n - 1 - n * pp; }
  double energy_decay() const { return pp + n - 1 - n * pp; }
};

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                   double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

// Relative tolerance against the coarse estimate of the panel.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, rel * std::abs(whole) + 1e-300, 30);
}

// Integral over [0, inf) of a density decaying like rho^decay. Geometric
// panels from the natural scale outward, each integrated adaptively, until the
// power-law tail bound drops below 1e-13 of the running total.
double radial_simpson(const std::function<double(double)>& f, double scale, double decay) {
  double total = adaptive_simpson(f, 0.0, scale, 1e-13);
  double a = scale;
  for (int k = 0; k < 4000; ++k) {
    const double b = 2.0 * a;
    total += adaptive_simpson(f, a, b, 1e-13);
    a = b;
    // f(rho) <= f(a) (rho/a)^decay for rho >= a once in the power regime.
    const double tail = f(a) * a / (-decay - 1.0);
    if (a > 64.0 * scale && tail < 1e-13 * total) return total + tail;
  }
  throw NumericError("radial Simpson quadrature did not reach its tail bound");
}

// Same integral in log variables rho = scale e^y with composite 20-point
// Gauss-Legendre panels of unit length, truncated by tail bounds on both sides.
double radial_gauss(const std::function<double(double)>& f, double scale, double decay, int n) {
  static const std::array<double, 10> x = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                           0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                           0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                           0.9931285991850949};
  static const std::array<double, 10> w = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                           0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                           0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                           0.0176140071391521};
  auto g = [&](double y) {
    const double rho = scale * std::exp(y);
    return f(rho) * rho;
  };
  auto panel = [&](double a) {
    const double c = a + 0.5, r = 0.5;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * (g(c - r * x[i]) + g(c + r * x[i]));
    return s * r;
  };
  double total = 0.0;
  // Near 0 the density behaves like rho^(n-1), so g ~ e^(n y).
  double lo = 0.0;
  for (; lo > -200.0; lo -= 1.0) {
    const double s = panel(lo - 1.0);
    total += s;
    if (g(lo - 1.0) / n < 1e-14 * total) break;
  }
  for (double a = 0.0; a < 5000.0; a += 1.0) {
    total += panel(a);
    const double tail = g(a + 1.0) / (-decay - 1.0);
    if (tail < 1e-14 * total) return total;
  }
  throw NumericError("radial Gauss-Legendre quadrature did not reach its tail bound");
}

struct RadialIntegrals {
  std::function<double(double)> norm;    // sigma -> n kappa integral of the L^q density
  std::function<double(double)> energy;  // sigma -> n kappa integral of F(grad U)^p
};

RadialIntegrals simpson_integrals(const RadialModel& m, double kappa) {
  return {[=](double sigma) {
            const double scale = std::pow(sigma, 1.0 / m.pp);
            return m.n * kappa *
                   radial_simpson([&](double r) { return m.norm_density(sigma, r); }, scale, m.norm_decay());
          },
          [=](double sigma) {
            const double scale = std::pow(sigma, 1.0 / m.pp);
            return m.n * kappa *
                   radial_simpson([&](double r) { return m.energy_density(sigma, r); }, scale, m.energy_decay());
          }};
}

RadialIntegrals gauss_integrals(const RadialModel& m, double kappa) {
  return {[=](double sigma) {
            const double scale = std::pow(sigma, 1.0 / m.pp);
            return m.n * kappa *
                   radial_gauss([&](double r) { return m.norm_density(sigma, r); }, scale, m.norm_decay(), m.n);
          },
          [=](double sigma) {
            const double scale = std::pow(sigma, 1.0 / m.pp);
            return m.n * kappa *
                   radial_gauss([&](double r) { return m.energy_density(sigma, r); }, scale, m.energy_decay(),
                                m.n);
          }};
}

// Root of norm(sigma) = 1; norm is decreasing in sigma. Bisection in log sigma,
// then secant steps kept inside the bracket.
double solve_sigma(const std::function<double(double)>& norm, const char* scheme) {
  auto r = [&](double ls) { return norm(std::exp(ls)) - 1.0; };
  double a = 0.0, ra = r(a);
  double b = a, rb = ra;
  double step = ra > 0.0 ? 1.0 : -1.0;  // residual > 0 means sigma too small
  for (int k = 0; k < 200 && (ra > 0.0) == (rb > 0.0); ++k) {
    a = b;
    ra = rb;
    b += step;
    rb = r(b);
  }
  if ((ra > 0.0) == (rb > 0.0)) {
    throw NumericError(std::string("sigma root search could not bracket a sign change (") + scheme + ")");
  }
  for (int k = 0; k < 30; ++k) {
    const double m = 0.5 * (a + b);
    const double rm = r(m);
    if ((rm > 0.0) == (ra > 0.0)) {
      a = m;
      ra = rm;
    } else {
      b = m;
      rb = rm;
    }
  }
  double x0 = a, r0 = ra, x1 = b, r1 = rb;
  double best = std::abs(ra) < std::abs(rb) ? a : b;
  double best_r = std::min(std::abs(ra), std::abs(rb));
  for (int k = 0; k < 60 && best_r > 1e-13; ++k) {
    double x2 = x1 - r1 * (x1 - x0) / (r1 - r0);
    if (!(x2 > std::min(a, b) && x2 < std::max(a, b))) x2 = 0.5 * (a + b);
    const double r2 = r(x2);
    if ((r2 > 0.0) == (ra > 0.0)) {
      a = x2;
      ra = r2;
    } else {
      b = x2;
      rb = r2;
    }
    if (std::abs(r2) < best_r) {
      best = x2;
      best_r = std::abs(r2);
    }
    x0 = x1;
    r0 = r1;
    x1 = x2;
    r1 = r2;
  }
  if (best_r > 1e-10) {
    throw NumericError(std::string("sigma root search stalled (") + scheme + "), residual " +
                       std::to_string(best_r));
  }
  return std::exp(best);
}

}  // namespace

double anisotropic_dirichlet_energy(const ScalarField& u, const GaugeSpec& g, double p, const ConeSpec& cone) {
  check_exponent(p);
  if (g.dim() != u.grid.dim) throw InputError("energy: gauge and grid dimensions differ");
  const Lattice lat = energy_lattice(u, cone);
  const Gradient grad{lat, u.values};
  return integrate_nodes(lat, [&](std::size_t i) {
    double d[3];
    grad(i, d);
    return power(kernel::gauge(g, d), p);
  });
}

double capillary_dirichlet_energy(const ScalarField& u, double theta, double p) {
  check_exponent(p);
  const GaugeSpec g = GaugeSpec::capillary(theta, u.grid.dim);
  const double c = g.cos_theta();
  const Lattice lat = energy_lattice(u, ConeSpec::half_space(u.grid.dim));
  const Gradient grad{lat, u.values};
  const int n = lat.n;
  return integrate_nodes(lat, [&](std::size_t i) {
    double d[3];
    grad(i, d);
    double sq = 0.0;
    for (int k = 0; k < n; ++k) sq += d[k] * d[k];
    return power(std::sqrt(sq) - c * d[n - 1], p);
  });
}

double symmetric_energy_from_mu(const MonotoneProfile& mu, double kappa, int n, double p) {
  check_exponent(p);
  const auto& pts = mu.points();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double dt = pts[k + 1].arg - pts[k].arg;
    const double dmu = pts[k + 1].value - pts[k].right;
    if (dmu <= 0.0) continue;
    const double mid = 0.5 * (pts[k + 1].value + pts[k].right);
    const double per = n * std::pow(kappa, 1.0 / n) * std::pow(mid, 1.0 - 1.0 / n);
    total += dt * std::pow(dmu / dt, 1.0 - p) * std::pow(per, p);
  }
  return total;
}

PolyaSzegoReport polya_szego_report(const ScalarField& u, const GaugeSpec& g, double p, const ConeSpec& cone,
                                    double tolerance, int levels) {
  check_exponent(p);
  return polya_szego_report(u, symmetrize(u, g, cone, levels), g, p, cone, tolerance);
}

PolyaSzegoReport polya_szego_report(const ScalarField& u, const Symmetrization& sym, const GaugeSpec& g, double p,
                                    const ConeSpec& cone, double tolerance) {
  check_exponent(p);
  if (!(sym.field.grid == u.grid)) throw InputError("polya_szego_report: symmetrization lives on another grid");
  PolyaSzegoReport r;
  r.lhs = anisotropic_dirichlet_energy(u, g, p, cone);
  r.rhs = anisotropic_dirichlet_energy(sym.field, g, p, cone);
  r.rhs_closed_form = symmetric_energy_from_mu(sym.mu, sym.kappa, u.grid.dim, p);
  r.slack = r.lhs - r.rhs;
  r.tolerance = tolerance;
  r.holds = r.lhs >= r.rhs - tolerance * r.lhs;
  return r;
}

double SobolevExtremal::value_at(double rho) const {
  const double pp = p / (p - 1.0);
  return -std::pow(sigma + std::pow(rho, pp), -(n - p) / p);
}

SobolevExtremal sobolev_extremal(double theta, double p, int n) {
  if (!(p > 1.0 && p < n)) throw DomainError("Sobolev exponent must satisfy 1 < p < n");
  const GaugeSpec g = GaugeSpec::capillary(theta, n);
  SobolevExtremal e;
  e.theta = theta;
  e.p = p;
  e.n = n;
  e.kappa = wulff_sector_volume(g, ConeSpec::half_space(n)).kappa;
  const RadialModel model{n, p, p / (p - 1.0)};

  const RadialIntegrals a = simpson_integrals(model, e.kappa);
  e.sigma = solve_sigma(a.norm, "Simpson");
  e.residual = std::abs(a.norm(e.sigma) - 1.0);
  e.constant = std::pow(a.energy(e.sigma), -1.0 / p);

  const RadialIntegrals b = gauss_integrals(model, e.kappa);
  e.sigma_alt = solve_sigma(b.norm, "Gauss-Legendre");
  e.residual_alt = std::abs(b.norm(e.sigma) - 1.0);
  e.constant_alt = std::pow(b.energy(e.sigma_alt), -1.0 / p);
  return e;
}

ScalarField sobolev_extremal_field(const SobolevExtremal& ext, const GridSpec& grid, double scale, double cutoff) {
  if (!(scale > 0.0) || !(cutoff > 0.0)) throw InputError("extremal field needs positive scale and cutoff");
  if (grid.dim != ext.n) throw InputError("extremal field: grid dimension differs from the extremal's");
  const GaugeSpec g = GaugeSpec::capillary(ext.theta, ext.n);
  const Lattice lat = Lattice::make(grid, ConeSpec::half_space(grid.dim));
  const double floor_value = ext.value_at(cutoff / scale);
  ScalarField out{grid, std::vector<double>(grid.node_count(), 0.0)};
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    const auto x = lat.position(i);
    const double rho = kernel::dual(g, x.data());
    out.values[i] = std::min(ext.value_at(rho / scale) - floor_value, 0.0);
  }
  return out;
}

double sobolev_quotient(const ScalarField& u, double theta, double p) {
  const int n = u.grid.dim;
  if (!(p > 1.0 && p < n)) throw DomainError("Sobolev exponent must satisfy 1 < p < n");
  const GaugeSpec g = GaugeSpec::capillary(theta, n);
  const ConeSpec cone = ConeSpec::half_space(n);
  const Lattice lat = energy_lattice(u, cone);
  const double q = n * p / (n - p);
  const double norm_q = integrate_nodes(lat, [&](std::size_t i) { return std::pow(std::abs(u.values[i]), q); });
  const double energy = anisotropic_dirichlet_energy(u, g, p, cone);
  if (norm_q == 0.0 || energy == 0.0) throw InputError("Sobolev quotient of a zero field");
  return std::pow(norm_q, 1.0 / q) / std::pow(energy, 1.0 / p);
}

MonotoneProfile energy_profile(const ScalarField& u, const GaugeSpec& g, const ConeSpec& cone, int levels) {
  if (levels < 2) throw InputError("energy_profile: levels must be at least 2");
  if (g.dim() != u.grid.dim) throw InputError("energy_profile: gauge and grid dimensions differ");
  const Lattice lat = energy_lattice(u, cone);
  double umin = 0.0;
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    if (u.values[i] > 0.0) throw PreconditionError("energy_profile: field has positive values");
    umin = std::min(umin, u.values[i]);
  }
  const std::size_t L = static_cast<std::size_t>(levels);
  const double lo = umin < 0.0 ? umin : -1.0;
  std::vector<double> t(L);
  for (std::size_t k = 0; k < L; ++k) t[k] = lo * (1.0 - static_cast<double>(k) / static_cast<double>(L - 1));
  t[L - 1] = 0.0;

  // Bucket each node's contribution at the first threshold above its value.
  std::vector<double> bucket(L + 1, 0.0);
  const Gradient grad{lat, u.values};
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    const double v = u.values[i];
    const auto k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), v) - t.begin());
    if (k >= L) continue;
    double d[3];
    grad(i, d);
    const double f = kernel::gauge(g, d);
    bucket[k] += lat.node_weight(i) * f * f;
  }
  std::vector<double> psi(L);
  double run = 0.0;
  for (std::size_t k = 0; k < L; ++k) {
    run += bucket[k];
    psi[k] = run;
  }
  return MonotoneProfile::from_pairs(t, psi);
}

}  // namespace capsym
