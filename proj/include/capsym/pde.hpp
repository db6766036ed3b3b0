#pragma once

#include <cstdint>
#include <vector>

#include "capsym/cone.hpp"
#include "capsym/gauge.hpp"
#include "capsym/grid.hpp"
#include "capsym/profile.hpp"
#include "capsym/rearrange.hpp"

namespace capsym {

enum class FluxKind {
  gauge_flux,         ///< a(x, xi) = grad(F^2/2)(xi)
  scaled_gauge_flux,  ///< a(x, xi) = (1 + c(x)) grad(F^2/2)(xi), c >= 0
};

struct OperatorSpec {
  FluxKind kind = FluxKind::gauge_flux;
  ScalarField c;  // only used by scaled_gauge_flux

  static OperatorSpec gauge();
  static OperatorSpec scaled(ScalarField c);

  /// Throws InputError if c is missing, negative, non-finite or on another grid.
  void validate(const GridSpec& grid) const;
  double factor(std::size_t node) const { return kind == FluxKind::scaled_gauge_flux ? 1.0 + c.values[node] : 1.0; }
};

/// Smallest a(x, xi).xi / F(xi)^2 over `samples` random nodes and directions.
/// Elliptic operators give at least 1.
double ellipticity_margin(const OperatorSpec& op, const GaugeSpec& g, const GridSpec& grid,
                          std::size_t samples = 1000, std::uint64_t seed = 11);

/// Mixed problem -div a(x, grad u) = f in Omega, u = 0 on the relative
/// boundary, a(x, grad u).nu = 0 on the wetted wall.
struct MixedBVP {
  RegionSpec region;
  ScalarField source;
  OperatorSpec flux;
  GaugeSpec gauge = GaugeSpec::euclidean(2);
  ConeSpec cone = ConeSpec::half_space(2);

  static MixedBVP constant_source(RegionSpec region, double f, const GaugeSpec& g,
                                  OperatorSpec flux = OperatorSpec::gauge());

  /// Throws InputError for inconsistent grids or dimensions, UnsupportedDomainError
  /// outside the half-space, InputError unless Omega has positive volume, relative
  /// perimeter and wetted area, PreconditionError if f > 0 somewhere in Omega.
  void validate() const;
};

struct SolverOptions {
  int max_iterations = 100;
  double residual_tol = 1e-8;  // max nodal residual |g_i| / w_i, relative to max(1, |f|_inf)
  double energy_tol = 1e-10;   // relative energy decrease that ends the line-searched phase
  double cg_tol = 1e-12;       // relative residual of the inner CG (3D only)
};

struct Solution {
  ScalarField u;
  std::vector<double> energy_history;  // energy after each accepted step, starting at w = 0
  int iterations = 0;
  double residual = 0.0;
  std::size_t unknowns = 0;
};

/// Minimizes the discrete energy sum over cells and corners of
/// (1 + c) F(grad w)^2 / 2 minus the lumped integral of f w. Nodes with phi >= 0
/// are held at 0, nodes of Omega on the wall stay free. Damped Newton from w = 0
/// with Armijo backtracking, so the recorded energies never increase. When the
/// energy decrease falls to roundoff, full Newton steps continue while they
/// lower the nodal residual; those steps are not recorded in energy_history.
/// Throws NumericError with the last residual if the iteration budget runs out
/// or the residual stalls above 1000 residual_tol.
Solution solve_mixed(const MixedBVP& problem, const SolverOptions& opts = {});

/// z_*(s) = (n^2 kappa^(2/n))^(-1) * integral from s to vol of r^(2/n - 2) F(r) dr
/// with F(r) the integral of f_* over [0, r], integrated exactly piece by piece.
/// Sampled at the breakpoints of f_* inside [0, vol] and `samples` uniform points.
/// Throws InputError unless vol > 0 and kappa > 0.
MonotoneProfile radial_profile_solution(const MonotoneProfile& f_star, double vol, int n, double kappa,
                                        int samples = 1024);

/// (F°_theta(x)^2 - r^2)/2 inside the Wulff sector of radius r, 0 outside.
/// Throws TruncationError if the sector does not fit in the grid.
ScalarField explicit_radial_solution(double theta, double r, const GridSpec& grid);

/// Staggered finite-difference div grad(F^2/2)(grad u) at nodes whose full
/// stencil lies in the cone; 0 elsewhere.
ScalarField anisotropic_laplacian(const ScalarField& u, const GaugeSpec& g, const ConeSpec& cone);

/// Mean of |grad(F^2/2)(grad u).E_n| over wall nodes inside Omega, gradients
/// one-sided in x_n.
double wall_conormal_flux(const ScalarField& u, const GaugeSpec& g, const RegionSpec& region);

struct ComparisonOptions {
  double tolerance = 0.03;  // violations count nodes with u_star < z - tolerance * |z|_inf
  int levels = default_levels;
  SolverOptions solver;
};

struct ComparisonReport {
  ScalarField u;
  ScalarField u_star;
  ScalarField z;          // grid solution on the symmetrized problem
  ScalarField z_profile;  // z_*(kappa F°^n) from the 1-D formula
  ScalarField slack;      // u_star - z
  double min_slack = 0.0;
  double mean_slack = 0.0;
  double tolerance = 0.0;
  std::size_t violations = 0;
  double z_linf = 0.0;
  double profile_mismatch = 0.0;  // |z - z_profile|_inf / |z|_inf
  double linf_u = 0.0;
  double linf_bound = 0.0;  // (1/2)(|Omega| / kappa)^(2/n), meaningful for f = -n
  double volume = 0.0;
  double kappa = 0.0;
  double star_radius = 0.0;
};

/// Solves the problem, symmetrizes the solution and the source, solves the
/// symmetric problem on the Wulff sector of equal volume with the plain gauge
/// flux, and compares pointwise.
ComparisonReport talenti_compare(const MixedBVP& problem, const ComparisonOptions& opts = {});

struct LinftyReport {
  double linf = 0.0;
  double bound = 0.0;  // (1/2)(|Omega| / kappa)^(2/n)
  double volume = 0.0;
  double iso_slack = 0.0;  // relative isoperimetric slack of Omega
  bool respected = false;  // linf <= bound (1 + tolerance)
  bool tight = false;      // Omega is a Wulff sector and |linf - bound| <= tolerance bound
};

/// Throws PreconditionError unless f = -n on Omega and the gauge is capillary.
LinftyReport linfty_bound_check(const MixedBVP& problem, const SolverOptions& opts = {}, double tolerance = 0.03);

}  // namespace capsym
