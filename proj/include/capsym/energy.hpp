#pragma once

#include "capsym/cone.hpp"
#include "capsym/gauge.hpp"
#include "capsym/grid.hpp"
#include "capsym/profile.hpp"
#include "capsym/rearrange.hpp"

namespace capsym {

/// Integral over the cone of F(grad u)^p. Gradients use central differences,
/// switching to second-order one-sided stencils at the wall and the box faces;
/// the integral is the trapezoid rule over the nodes in the cone.
/// Throws InputError for p < 1 or mismatched dimensions.
double anisotropic_dirichlet_energy(const ScalarField& u, const GaugeSpec& g, double p, const ConeSpec& cone);

/// Same integral in the half-space with the capillary integrand
/// (|grad u| - cos(theta) d_n u)^p written out explicitly.
double capillary_dirichlet_energy(const ScalarField& u, double theta, double p);

struct PolyaSzegoReport {
  double lhs = 0.0;              // energy of u
  double rhs = 0.0;              // energy of the symmetrized field
  double rhs_closed_form = 0.0;  // 1-D formula through mu
  double slack = 0.0;            // lhs - rhs
  double tolerance = 0.0;        // relative to lhs
  bool holds = false;            // lhs >= rhs - tolerance * lhs
};

PolyaSzegoReport polya_szego_report(const ScalarField& u, const GaugeSpec& g, double p, const ConeSpec& cone,
                                    double tolerance = 0.02, int levels = default_levels);

/// Same report from a symmetrization computed earlier (reused across exponents).
PolyaSzegoReport polya_szego_report(const ScalarField& u, const Symmetrization& sym, const GaugeSpec& g, double p,
                                    const ConeSpec& cone, double tolerance = 0.02);

/// Closed form of the symmetrized energy from the distribution function:
/// the integral over t of (mu')^(1-p) (n kappa^(1/n) mu^(1-1/n))^p, by the
/// midpoint rule on the sampled intervals.
double symmetric_energy_from_mu(const MonotoneProfile& mu, double kappa, int n, double p);

/// Optimizer of the Sobolev quotient in the half-space for the capillary gauge,
/// U(x) = -(sigma + F°(x)^p')^(-(n-p)/p) with p' = p/(p-1).
struct SobolevExtremal {
  double theta = 0.0;
  double p = 0.0;
  int n = 0;
  double kappa = 0.0;
  double sigma = 0.0;     // normalization root, adaptive Simpson scheme
  double constant = 0.0;  // C = (energy of U)^(-1/p)
  double sigma_alt = 0.0;     // same root with Gauss-Legendre quadrature
  double constant_alt = 0.0;  // constant with Gauss-Legendre quadrature
  double residual = 0.0;      // |norm^q - 1| at sigma, Simpson
  double residual_alt = 0.0;  // |norm^q - 1| at sigma, Gauss-Legendre

  double critical_exponent() const { return n * p / (n - p); }
  double value_at(double rho) const;  // U as a function of F°(x)
};

/// Throws DomainError unless 1 < p < n, NumericError if the root search fails.
SobolevExtremal sobolev_extremal(double theta, double p, int n);

/// Samples U((x)/scale) on a half-space grid, shifted and clipped so it vanishes
/// for F°(x) >= cutoff: min(U(x/scale) - U(cutoff/scale), 0).
ScalarField sobolev_extremal_field(const SobolevExtremal& ext, const GridSpec& grid, double scale, double cutoff);

/// ||u||_{L^q} / (integral of F_theta(grad u)^p)^(1/p) over the half-space,
/// q = np/(n-p). Throws DomainError unless 1 < p < n, InputError for a zero field.
double sobolev_quotient(const ScalarField& u, double theta, double p);

/// Psi(t) = integral over {u < t} of F(grad u)^2 at `levels` thresholds over
/// [min u, 0]. Throws PreconditionError if u > 0 somewhere.
MonotoneProfile energy_profile(const ScalarField& u, const GaugeSpec& g, const ConeSpec& cone,
                               int levels = default_levels);

}  // namespace capsym
