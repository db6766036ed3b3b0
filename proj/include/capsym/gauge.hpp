#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "capsym/cone.hpp"

namespace capsym {

enum class GaugeKind { euclidean, capillary };

/// A gauge on R^n: the Euclidean norm, or the capillary gauge
/// F(xi) = |xi| - cos(theta) <xi, E_n> for a contact angle theta in (0, pi).
///
/// The Euclidean kind is the capillary gauge at theta = pi/2 with cos(theta)
/// fixed to exactly 0. A capillary gauge built with the double closest to pi/2
/// is normalized to the same exact values.
class GaugeSpec {
 public:
  /// Angles closer than this to 0 or pi are rejected.
  static constexpr double default_angle_guard = 1e-6;

  static GaugeSpec euclidean(int dim);
  static GaugeSpec capillary(double theta, int dim, double angle_guard = default_angle_guard);

  GaugeKind kind() const { return kind_; }
  double theta() const { return theta_; }
  int dim() const { return dim_; }
  double cos_theta() const { return cos_; }
  double sin_theta() const { return sin_; }

 private:
  GaugeSpec(GaugeKind kind, double theta, int dim, double c, double s)
      : kind_(kind), theta_(theta), dim_(dim), cos_(c), sin_(s) {}

  GaugeKind kind_;
  double theta_;
  int dim_;
  double cos_;
  double sin_;
};

/// Volumes attached to a gauge and a cone: kappa = |W ∩ cone| for the unit
/// Wulff ball W, omega = |B_1 ∩ cone|. Monte Carlo runs also fill the standard
/// errors and the sampler settings.
struct SectorConstants {
  double kappa = 0.0;
  double omega = 0.0;
  int dim = 0;
  double kappa_stderr = 0.0;
  double omega_stderr = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
};

enum class VolumeMethod { analytic, montecarlo };

struct MonteCarloOptions {
  std::uint64_t seed = 20240229;
  std::uint64_t samples = 1'000'000;
};

// Checked entry points: validate length and finiteness, throw InputError /
// DomainError.
double gauge_eval(const GaugeSpec& g, std::span<const double> xi);
std::vector<double> gauge_grad(const GaugeSpec& g, std::span<const double> xi);
double dual_eval(const GaugeSpec& g, std::span<const double> x);
std::vector<double> dual_grad(const GaugeSpec& g, std::span<const double> x);

/// Brute-force dual gauge: max of <x,z>/F(z) over `samples` directions z on the
/// unit sphere (uniform angles for n = 2, a Fibonacci lattice for n = 3,
/// seeded Gaussian directions otherwise). Approaches dual_eval from below.
double dual_numeric(const GaugeSpec& g, std::span<const double> x, std::size_t samples,
                    std::uint64_t seed = 7);

SectorConstants wulff_sector_volume(const GaugeSpec& g, const ConeSpec& cone,
                                    VolumeMethod method = VolumeMethod::analytic,
                                    const MonteCarloOptions& mc = {});

/// Volume of the unit Euclidean ball in R^n.
double unit_ball_volume(int n);

// Unchecked kernels for inner loops. Lengths must equal g.dim().
namespace kernel {

double gauge(const GaugeSpec& g, const double* xi);
double dual(const GaugeSpec& g, const double* x);
/// Gradient of F/2 squared: F(xi) grad F(xi), and 0 at xi = 0.
void half_square_grad(const GaugeSpec& g, const double* xi, double* out);
/// Hessian of F/2 squared (row-major n x n). At xi = 0, where the Hessian jumps,
/// the sphere average I + cos^2(theta) E_n E_n^T is returned.
void half_square_hessian(const GaugeSpec& g, const double* xi, double* out);

}  // namespace kernel

}  // namespace capsym
