#include "capsym/gauge.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "capsym/error.hpp"

namespace capsym {

namespace {

void check_vector(const GaugeSpec& g, std::span<const double> v, const char* what) {
  if (static_cast<int>(v.size()) != g.dim()) {
    throw InputError(std::string(what) + ": expected a vector of length " + std::to_string(g.dim()) +
                     ", got " + std::to_string(v.size()));
  }
  for (double c : v) {
    if (!std::isfinite(c)) throw InputError(std::string(what) + ": non-finite component");
  }
}

double norm(const double* v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

bool is_zero(std::span<const double> v) {
  for (double c : v) {
    if (c != 0.0) return false;
  }
  return true;
}

}  // namespace

GaugeSpec GaugeSpec::euclidean(int dim) {
  if (dim < 2) throw InputError("gauge dimension must be at least 2");
  return GaugeSpec(GaugeKind::euclidean, std::numbers::pi / 2, dim, 0.0, 1.0);
}

GaugeSpec GaugeSpec::capillary(double theta, int dim, double angle_guard) {
  if (dim < 2) throw InputError("gauge dimension must be at least 2");
  if (!std::isfinite(theta) || theta <= angle_guard || theta >= std::numbers::pi - angle_guard) {
    throw InputError("contact angle must lie in (eps, pi - eps), got " + std::to_string(theta));
  }
  if (theta == std::numbers::pi / 2) return GaugeSpec(GaugeKind::capillary, theta, dim, 0.0, 1.0);
  return GaugeSpec(GaugeKind::capillary, theta, dim, std::cos(theta), std::sin(theta));
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

namespace kernel {

double gauge(const GaugeSpec& g, const double* xi) {
  const int n = g.dim();
  return norm(xi, n) - g.cos_theta() * xi[n - 1];
}

double dual(const GaugeSpec& g, const double* x) {
  const int n = g.dim();
  const double r2 = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
  }();
  if (r2 == 0.0) return 0.0;
  const double c = g.cos_theta();
  const double s = g.sin_theta();
  const double cx = c * x[n - 1];
  const double root = std::sqrt(cx * cx + s * s * r2);
  // Two algebraically equal forms; pick the one without cancellation.
  if (cx >= 0.0) return (root + cx) / (s * s);
  return r2 / (root - cx);
}

void half_square_grad(const GaugeSpec& g, const double* xi, double* out) {
  const int n = g.dim();
  const double r = norm(xi, n);
  if (r == 0.0) {
    for (int i = 0; i < n; ++i) out[i] = 0.0;
    return;
  }
  const double c = g.cos_theta();
  const double scale = 1.0 - c * xi[n - 1] / r;  // F(xi)/|xi|
  for (int i = 0; i < n; ++i) out[i] = scale * xi[i];
  out[n - 1] -= scale * c * r;
}

void half_square_hessian(const GaugeSpec& g, const double* xi, double* out) {
  const int n = g.dim();
  const double c = g.cos_theta();
  const double r = norm(xi, n);
  for (int i = 0; i < n * n; ++i) out[i] = 0.0;
  if (r == 0.0) {
    for (int i = 0; i < n; ++i) out[i * n + i] = 1.0;
    out[n * n - 1] += c * c;
    return;
  }
  double u[8];
  double grad_f[8];
  for (int i = 0; i < n; ++i) {
    u[i] = xi[i] / r;
    grad_f[i] = u[i];
  }
  grad_f[n - 1] -= c;
  const double ratio = 1.0 - c * u[n - 1];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out[i * n + j] = grad_f[i] * grad_f[j] + ratio * ((i == j ? 1.0 : 0.0) - u[i] * u[j]);
    }
  }
}

}  // namespace kernel

double gauge_eval(const GaugeSpec& g, std::span<const double> xi) {
  check_vector(g, xi, "gauge_eval");
  if (is_zero(xi)) return 0.0;
  return std::max(0.0, kernel::gauge(g, xi.data()));
}

std::vector<double> gauge_grad(const GaugeSpec& g, std::span<const double> xi) {
  check_vector(g, xi, "gauge_grad");
  if (is_zero(xi)) throw DomainError("gauge_grad: the gauge is not differentiable at the origin");
  const int n = g.dim();
  const double r = norm(xi.data(), n);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = xi[i] / r;
  out[n - 1] -= g.cos_theta();
  return out;
}

double dual_eval(const GaugeSpec& g, std::span<const double> x) {
  check_vector(g, x, "dual_eval");
  return kernel::dual(g, x.data());
}

std::vector<double> dual_grad(const GaugeSpec& g, std::span<const double> x) {
  check_vector(g, x, "dual_grad");
  if (is_zero(x)) throw DomainError("dual_grad: the dual gauge is not differentiable at the origin");
  // x lies on the boundary of the Wulff ball of radius rho = F°(x), the ball
  // |y + rho cos(theta) E_n| < rho. The gradient is the outer unit normal
  // there, scaled so that F(grad) = 1.
  const int n = g.dim();
  const double c = g.cos_theta();
  const double rho = kernel::dual(g, x.data());
  std::vector<double> nu(n);
  for (int i = 0; i < n; ++i) nu[i] = x[i] / rho;
  nu[n - 1] += c;
  const double len = norm(nu.data(), n);
  for (double& v : nu) v /= len;
  const double f = 1.0 - c * nu[n - 1];
  for (double& v : nu) v /= f;
  return nu;
}

double dual_numeric(const GaugeSpec& g, std::span<const double> x, std::size_t samples,
                    std::uint64_t seed) {
  check_vector(g, x, "dual_numeric");
  if (samples < 1000) throw InputError("dual_numeric: at least 1000 samples are required");
  if (is_zero(x)) return 0.0;
  const int n = g.dim();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> z(n);
  auto consider = [&] {
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += x[i] * z[i];
    best = std::max(best, dot / kernel::gauge(g, z.data()));
  };
  if (n == 2) {
    for (std::size_t k = 0; k < samples; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
      z[0] = std::cos(a);
      z[1] = std::sin(a);
      consider();
    }
  } else if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < samples; ++k) {
      const double y = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
      const double rad = std::sqrt(std::max(0.0, 1.0 - y * y));
      const double a = golden * static_cast<double>(k);
      z[0] = rad * std::cos(a);
      z[1] = rad * std::sin(a);
      z[2] = y;
      consider();
    }
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t k = 0; k < samples; ++k) {
      double len = 0.0;
      do {
        for (auto& v : z) v = normal(rng);
        len = norm(z.data(), n);
      } while (len == 0.0);
      for (auto& v : z) v /= len;
      consider();
    }
  }
  return best;
}

namespace {

double analytic_kappa(const GaugeSpec& g, const ConeSpec& cone) {
  const int n = g.dim();
  if (cone.kind == ConeKind::full_space) return unit_ball_volume(n);
  const double c = g.cos_theta();
  if (c == 0.0) return 0.5 * unit_ball_volume(n);
  // The cap of B_1(-c E_n) above the wall lies at height > c from the centre.
  if (n == 2) return std::acos(c) - c * std::sqrt(1.0 - c * c);
  if (n == 3) {
    const double h = 1.0 - c;
    return std::numbers::pi * h * h * (3.0 - h) / 3.0;
  }
  throw UnsupportedDomainError("analytic Wulff sector volume needs dim 2 or 3, or theta = pi/2");
}

struct McEstimate {
  double volume;
  double stderr_;
};

template <class Inside>
McEstimate monte_carlo_box(int n, const std::vector<double>& lo, const std::vector<double>& hi,
                           std::uint64_t seed, std::uint64_t samples, Inside inside) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(n);
  double box = 1.0;
  for (int i = 0; i < n; ++i) box *= hi[i] - lo[i];
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    if (inside(x.data())) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

}  // namespace

SectorConstants wulff_sector_volume(const GaugeSpec& g, const ConeSpec& cone, VolumeMethod method,
                                    const MonteCarloOptions& mc) {
  const int n = g.dim();
  if (cone.dim != n) throw InputError("wulff_sector_volume: cone and gauge dimensions differ");
  if (cone.kind != ConeKind::half_space && cone.kind != ConeKind::full_space) {
    throw UnsupportedDomainError("wulff_sector_volume: unsupported cone");
  }
  SectorConstants out;
  out.dim = n;
  if (method == VolumeMethod::analytic) {
    out.kappa = analytic_kappa(g, cone);
    out.omega = cone.kind == ConeKind::half_space ? 0.5 * unit_ball_volume(n) : unit_ball_volume(n);
    return out;
  }
  if (mc.samples == 0) throw InputError("wulff_sector_volume: Monte Carlo needs samples > 0");
  const double c = g.cos_theta();
  std::vector<double> lo(n, -1.0), hi(n, 1.0);
  if (cone.kind == ConeKind::half_space) {
    lo[n - 1] = 0.0;
    hi[n - 1] = 1.0 - c;
  } else {
    lo[n - 1] = -1.0 - c;
    hi[n - 1] = 1.0 - c;
  }
  const auto k = monte_carlo_box(n, lo, hi, mc.seed, mc.samples,
                                 [&](const double* x) { return kernel::dual(g, x) < 1.0; });
  std::vector<double> blo(n, -1.0), bhi(n, 1.0);
  if (cone.kind == ConeKind::half_space) blo[n - 1] = 0.0;
  const auto w = monte_carlo_box(n, blo, bhi, mc.seed + 1, mc.samples,
                                 [&](const double* x) { return norm(x, n) < 1.0; });
  out.kappa = k.volume;
  out.kappa_stderr = k.stderr_;
  out.omega = w.volume;
  out.omega_stderr = w.stderr_;
  out.seed = mc.seed;
  out.samples = mc.samples;
  return out;
}

}  // namespace capsym
