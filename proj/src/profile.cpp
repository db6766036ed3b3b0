#include "capsym/profile.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "capsym/error.hpp"
#include "format.hpp"

namespace capsym {

MonotoneProfile::MonotoneProfile(std::vector<Breakpoint> points, Interpolation interp, bool check_monotone)
    : points_(std::move(points)), interp_(interp) {
  if (interp_ == Interpolation::step) {
    for (auto& p : points_) p.right = p.value;
  }
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const auto& p = points_[k];
    if (!std::isfinite(p.arg) || !std::isfinite(p.value) || !std::isfinite(p.right)) {
      throw InputError("profile breakpoint " + std::to_string(k) + " is not finite");
    }
    if (k > 0 && !(points_[k - 1].arg < p.arg)) {
      throw InputError("profile arguments must be strictly increasing (breakpoint " + std::to_string(k) + ")");
    }
    if (check_monotone) {
      if (p.right < p.value || (k > 0 && p.value < points_[k - 1].right)) {
        throw InputError("profile values must be non-decreasing (breakpoint " + std::to_string(k) + ")");
      }
    }
  }
}

MonotoneProfile MonotoneProfile::from_pairs(const std::vector<double>& args, const std::vector<double>& values,
                                            Interpolation interp, bool check_monotone) {
  if (args.size() != values.size()) throw InputError("profile: argument and value counts differ");
  std::vector<Breakpoint> pts(args.size());
  for (std::size_t k = 0; k < args.size(); ++k) pts[k] = {args[k], values[k], values[k]};
  return MonotoneProfile(std::move(pts), interp, check_monotone);
}

std::size_t MonotoneProfile::segment(double x) const {
  // First breakpoint with arg >= x, minus one.
  auto it = std::lower_bound(points_.begin(), points_.end(), x,
                             [](const Breakpoint& p, double v) { return p.arg < v; });
  return static_cast<std::size_t>(it - points_.begin()) - 1;
}

double MonotoneProfile::operator()(double x) const {
  if (points_.empty()) throw InputError("evaluating an empty profile");
  if (x <= points_.front().arg) return points_.front().value;
  if (x > points_.back().arg) return points_.back().right;
  const std::size_t k = segment(x);
  const auto& a = points_[k];
  const auto& b = points_[k + 1];
  if (interp_ == Interpolation::step) return b.value;
  const double t = (x - a.arg) / (b.arg - a.arg);
  return a.right + t * (b.value - a.right);
}

double MonotoneProfile::integral(double a, double b) const {
  if (points_.empty()) throw InputError("integrating an empty profile");
  if (b < a) throw InputError("profile integral needs a <= b");
  double total = 0.0;
  // Constant extensions.
  const double lo = points_.front().arg;
  const double hi = points_.back().arg;
  if (a < lo) total += (std::min(b, lo) - a) * points_.front().value;
  if (b > hi) total += (b - std::max(a, hi)) * points_.back().right;
  const double ca = std::max(a, lo);
  const double cb = std::min(b, hi);
  if (cb <= ca) return total;
  std::size_t k = ca <= lo ? 0 : segment(ca);
  for (; k + 1 < points_.size() && points_[k].arg < cb; ++k) {
    const auto& p = points_[k];
    const auto& q = points_[k + 1];
    const double x0 = std::max(ca, p.arg);
    const double x1 = std::min(cb, q.arg);
    if (x1 <= x0) continue;
    if (interp_ == Interpolation::step) {
      total += (x1 - x0) * q.value;
    } else {
      const double slope = (q.value - p.right) / (q.arg - p.arg);
      const double f0 = p.right + slope * (x0 - p.arg);
      const double f1 = p.right + slope * (x1 - p.arg);
      total += 0.5 * (f0 + f1) * (x1 - x0);
    }
  }
  return total;
}

void MonotoneProfile::write_csv(std::ostream& os, const std::string& arg_name, const std::string& value_name) const {
  os << arg_name << ',' << value_name << '\n';
  for (const auto& p : points_) {
    os << fmt12(p.arg) << ',' << fmt12(p.value) << '\n';
    if (p.right != p.value) os << fmt12(p.arg) << ',' << fmt12(p.right) << '\n';
  }
}

}  // namespace capsym
