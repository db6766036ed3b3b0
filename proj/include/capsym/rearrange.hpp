#pragma once

#include "capsym/cone.hpp"
#include "capsym/gauge.hpp"
#include "capsym/grid.hpp"
#include "capsym/profile.hpp"

namespace capsym {

/// Default number of thresholds used to sample distribution functions.
inline constexpr int default_levels = 256;

/// mu(t) = |{u < t} ∩ cone| at `levels` thresholds spread uniformly over
/// [min u, 0], each one the cut-cell volume of {u - t < 0}. A field that
/// vanishes identically gets thresholds over [-1, 0] and mu = 0.
///
/// Throws PreconditionError if u > 0 anywhere (solutions of the mixed problem
/// with non-positive data are non-positive, so this signals misuse) and
/// TruncationError if u < 0 on an outer face of the box.
MonotoneProfile distribution_function(const ScalarField& u, const ConeSpec& cone, int levels = default_levels);

/// u_*(s) = sup{t <= 0 : mu(t) < s}, the left-continuous generalized inverse.
/// A flat piece of mu becomes a jump of u_*, a jump of mu a flat piece.
/// Throws InputError for an empty profile and PreconditionError if mu does not
/// start at 0.
MonotoneProfile increasing_rearrangement(const MonotoneProfile& mu);

/// Samples profile(kappa F°(x)^n) on the grid, 0 outside the cone.
ScalarField radial_field(const MonotoneProfile& profile, const GaugeSpec& g, const ConeSpec& cone,
                         const GridSpec& grid);

struct Symmetrization {
  ScalarField field;
  MonotoneProfile mu;
  MonotoneProfile rearranged;  // u_*
  double kappa = 0.0;
};

/// Convex symmetrization u_star(x) = u_*(kappa F°(x)^n) with kappa = |W ∩ cone|.
Symmetrization symmetrize(const ScalarField& u, const GaugeSpec& g, const ConeSpec& cone,
                          int levels = default_levels);

ScalarField convex_symmetrize(const ScalarField& u, const GaugeSpec& g, const ConeSpec& cone,
                              int levels = default_levels);

/// Convex symmetrization in the half-space with the capillary gauge of angle
/// theta: sublevel sets become the off-centred balls B_r(-r cos(theta) E_n) ∩ R^n_+.
ScalarField capillary_symmetrize(const ScalarField& u, double theta, int levels = default_levels);

/// f_*, the increasing rearrangement of f built by sorting node values with
/// their quadrature weights. Step interpolation: f_*(s) is the value of the
/// sorted block that covers s.
MonotoneProfile rearranged_source(const ScalarField& f, const ConeSpec& cone);

}  // namespace capsym
