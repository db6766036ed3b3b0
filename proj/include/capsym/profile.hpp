#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace capsym {

enum class Interpolation {
  linear,  ///< piecewise linear, jumps allowed at breakpoints
  step,    ///< f(x) = value of the first breakpoint with arg >= x
};

struct Breakpoint {
  double arg = 0.0;
  double value = 0.0;  ///< value at arg (left limit)
  double right = 0.0;  ///< right limit at arg; equal to value where continuous
};

/// A one-dimensional non-decreasing function stored as sorted breakpoints.
/// Every evaluation is left-continuous. Outside [front, back] the profile is
/// extended by constants.
class MonotoneProfile {
 public:
  MonotoneProfile() = default;
  /// Throws InputError if args are not strictly increasing or (when
  /// `check_monotone`) values decrease.
  MonotoneProfile(std::vector<Breakpoint> points, Interpolation interp, bool check_monotone = true);

  static MonotoneProfile from_pairs(const std::vector<double>& args, const std::vector<double>& values,
                                    Interpolation interp = Interpolation::linear, bool check_monotone = true);

  double operator()(double x) const;
  /// Exact integral of the interpolant over [a, b], a <= b.
  double integral(double a, double b) const;

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<Breakpoint>& points() const { return points_; }
  Interpolation interpolation() const { return interp_; }
  double front_arg() const { return points_.front().arg; }
  double back_arg() const { return points_.back().arg; }

  /// Two-column CSV with a one-line header; a jump prints two rows at the same argument.
  void write_csv(std::ostream& os, const std::string& arg_name, const std::string& value_name) const;

 private:
  std::size_t segment(double x) const;  // k with arg_k < x <= arg_{k+1}
  std::vector<Breakpoint> points_;
  Interpolation interp_ = Interpolation::linear;
};

}  // namespace capsym
