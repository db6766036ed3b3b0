#include "capsym/pde.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "capsym/error.hpp"
#include "capsym/geometry.hpp"
#include "capsym/parallel.hpp"
#include "format.hpp"
#include "simplex.hpp"
#include "stencil.hpp"

namespace capsym {

OperatorSpec OperatorSpec::gauge() { return {}; }

OperatorSpec OperatorSpec::scaled(ScalarField c) {
  OperatorSpec op;
  op.kind = FluxKind::scaled_gauge_flux;
  op.c = std::move(c);
  return op;
}

void OperatorSpec::validate(const GridSpec& grid) const {
  if (kind == FluxKind::gauge_flux) return;
  if (!(c.grid == grid)) throw InputError("scaled flux: coefficient field lives on a different grid");
  c.validate();
  for (double v : c.values) {
    if (v < 0.0) throw InputError("scaled flux: coefficient c must be non-negative");
  }
}

double ellipticity_margin(const OperatorSpec& op, const GaugeSpec& g, const GridSpec& grid, std::size_t samples,
                          std::uint64_t seed) {
  op.validate(grid);
  const int n = g.dim();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> node(0, grid.node_count() - 1);
  std::normal_distribution<double> normal;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t i = node(rng);
    double xi[8], a[8];
    for (int k = 0; k < n; ++k) xi[k] = normal(rng);
    kernel::half_square_grad(g, xi, a);
    double dot = 0.0;
    for (int k = 0; k < n; ++k) dot += op.factor(i) * a[k] * xi[k];
    const double f = kernel::gauge(g, xi);
    worst = std::min(worst, dot / (f * f));
  }
  return worst;
}

MixedBVP MixedBVP::constant_source(RegionSpec region, double f, const GaugeSpec& g, OperatorSpec flux) {
  MixedBVP p;
  p.source = {region.grid, std::vector<double>(region.grid.node_count(), f)};
  p.region = std::move(region);
  p.flux = std::move(flux);
  p.gauge = g;
  p.cone = ConeSpec::half_space(g.dim());
  return p;
}

void MixedBVP::validate() const {
  region.validate();
  source.validate();
  if (!(source.grid == region.grid)) throw InputError("problem: source and region grids differ");
  if (gauge.dim() != region.grid.dim || cone.dim != region.grid.dim) {
    throw InputError("problem: gauge, cone and grid dimensions differ");
  }
  if (cone.kind != ConeKind::half_space) {
    throw UnsupportedDomainError("mixed problems are posed in the half-space (the wall carries the Neumann part)");
  }
  flux.validate(region.grid);
  const RegionMeasures m = measure_region(region, gauge, cone);
  if (!(m.volume > 0.0)) throw InputError("problem: Omega has zero volume");
  if (!(m.perimeter > 0.0)) throw InputError("problem: Omega has no relative boundary (Dirichlet part)");
  if (!(m.wetting > 0.0)) throw InputError("problem: Omega does not touch the wall (Neumann part)");
  const Lattice lat = Lattice::make(region.grid, cone);
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    if (region.phi[i] < 0.0 && source.values[i] > 0.0) {
      throw PreconditionError("problem: source f must be non-positive in Omega");
    }
  }
}

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Corner-gradient discretization of the energy on the cells that touch Omega.
class Discretization {
 public:
  explicit Discretization(const MixedBVP& pb)
      : pb_(pb), lat_(Lattice::make(pb.region.grid, pb.cone)), n_(lat_.n), h_(lat_.h) {
    off_ = detail::corner_offsets(lat_);
    corners_ = 1 << n_;
    corner_weight_ = std::pow(h_, n_) / corners_;
    index_.assign(pb.region.grid.node_count(), -1);
    for (std::size_t i = lat_.node_begin(); i < lat_.node_end(); ++i) {
      if (pb.region.phi[i] < 0.0) {
        index_[i] = static_cast<int>(nodes_.size());
        nodes_.push_back(i);
      }
    }
    for (std::size_t i : nodes_) {
      mass_.push_back(lat_.node_weight(i));
      load_.push_back(lat_.node_weight(i) * pb.source.values[i]);
      f_inf_ = std::max(f_inf_, std::abs(pb.source.values[i]));
    }
    const long ny = n_ == 3 ? lat_.count[1] - 1 : 1;
    for (long k = lat_.first_layer; k + 1 < lat_.layers(); ++k) {
      for (long j = 0; j < ny; ++j) {
        for (long i = 0; i + 1 < lat_.count[0]; ++i) {
          const std::size_t base = n_ == 2 ? lat_.index(i, k) : lat_.index(i, j, k);
          bool any = false;
          for (int m = 0; m < corners_ && !any; ++m) any = index_[base + off_[m]] >= 0;
          if (any) cells_.push_back(base);
        }
      }
    }
  }

  std::size_t size() const { return nodes_.size(); }
  double f_inf() const { return f_inf_; }
  const std::vector<double>& mass() const { return mass_; }

  double energy(const Eigen::VectorXd& w) const {
    const double quad = chunked_sum(cells_.size(), 1024, [&](std::size_t lo, std::size_t hi) {
      double s = 0.0;
      double v[8], G[3];
      for (std::size_t c = lo; c < hi; ++c) {
        values(cells_[c], w, v);
        for (int m = 0; m < corners_; ++m) {
          corner_grad(v, m, G);
          const double f = kernel::gauge(pb_.gauge, G);
          s += pb_.flux.factor(cells_[c] + off_[m]) * 0.5 * f * f;
        }
      }
      return s;
    });
    double lin = 0.0;
    for (std::size_t a = 0; a < nodes_.size(); ++a) lin += load_[a] * w[static_cast<Eigen::Index>(a)];
    return corner_weight_ * quad - lin;
  }

  void gradient(const Eigen::VectorXd& w, Eigen::VectorXd& g) const {
    g.setZero(static_cast<Eigen::Index>(size()));
    double v[8], G[3], q[3];
    for (std::size_t base : cells_) {
      values(base, w, v);
      for (int m = 0; m < corners_; ++m) {
        corner_grad(v, m, G);
        kernel::half_square_grad(pb_.gauge, G, q);
        const double s = corner_weight_ * pb_.flux.factor(base + off_[m]) / h_;
        for (int k = 0; k < n_; ++k) {
          const int hi = m | (1 << k), lo = m & ~(1 << k);
          add(g, base + off_[hi], s * q[k]);
          add(g, base + off_[lo], -s * q[k]);
        }
      }
    }
    for (std::size_t a = 0; a < nodes_.size(); ++a) g[static_cast<Eigen::Index>(a)] -= load_[a];
  }

  // Lower triangle of the Hessian on a fixed pattern: every free node couples
  // to the free nodes of its 3^n neighbourhood.
  void build_pattern(SpMat& H) {
    const int S = n_ == 2 ? 9 : 27;
    slot_.assign(size() * static_cast<std::size_t>(S), -1);
    std::vector<Eigen::Triplet<double, int>> trip;
    trip.reserve(size() * static_cast<std::size_t>(S / 2 + 1));
    for (std::size_t b = 0; b < nodes_.size(); ++b) {
      for (int code = 0; code < S; ++code) {
        long d = 0;
        int rest = code;
        for (int k = 0; k < n_; ++k) {
          d += (rest % 3 - 1) * lat_.stride[k];
          rest /= 3;
        }
        if (d < 0) continue;
        const long node = static_cast<long>(nodes_[b]) + d;
        if (node >= static_cast<long>(index_.size())) continue;
        const int a = index_[static_cast<std::size_t>(node)];
        if (a < 0) continue;
        trip.emplace_back(a, static_cast<int>(b), 0.0);
      }
    }
    H.resize(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
    H.setFromTriplets(trip.begin(), trip.end());
    H.makeCompressed();
    for (int b = 0; b < H.outerSize(); ++b) {
      for (int p = H.outerIndexPtr()[b]; p < H.outerIndexPtr()[b + 1]; ++p) {
        const int a = H.innerIndexPtr()[p];
        const long d = static_cast<long>(nodes_[static_cast<std::size_t>(a)]) -
                       static_cast<long>(nodes_[static_cast<std::size_t>(b)]);
        slot_[static_cast<std::size_t>(b) * S + static_cast<std::size_t>(code_of(d))] = p;
      }
    }
  }

  void hessian(const Eigen::VectorXd& w, SpMat& H) const {
    double* val = H.valuePtr();
    std::fill(val, val + H.nonZeros(), 0.0);
    double v[8], G[3], M[9];
    for (std::size_t base : cells_) {
      values(base, w, v);
      for (int m = 0; m < corners_; ++m) {
        corner_grad(v, m, G);
        kernel::half_square_hessian(pb_.gauge, G, M);
        const double scale = corner_weight_ * pb_.flux.factor(base + off_[m]) / (h_ * h_);
        // Local nodes: m with sign s_k on axis k, and m ^ bit k with -s_k.
        int local[4];
        double coef[4][3] = {};
        local[0] = m;
        for (int k = 0; k < n_; ++k) {
          const double s = (m >> k) & 1 ? 1.0 : -1.0;
          coef[0][k] = s;
          local[1 + k] = m ^ (1 << k);
          coef[1 + k][k] = -s;
        }
        for (int a = 0; a <= n_; ++a) {
          const int ia = index_[base + off_[local[a]]];
          if (ia < 0) continue;
          for (int b = 0; b <= n_; ++b) {
            const int ib = index_[base + off_[local[b]]];
            if (ib < ia) continue;  // lower triangle only; also skips fixed nodes
            double k_ab = 0.0;
            for (int k = 0; k < n_; ++k) {
              if (coef[a][k] == 0.0) continue;
              for (int l = 0; l < n_; ++l) k_ab += coef[a][k] * M[k * n_ + l] * coef[b][l];
            }
            // ib >= ia: row ib, column ia.
            const long d = static_cast<long>(off_[local[b]]) - static_cast<long>(off_[local[a]]);
            const int S = n_ == 2 ? 9 : 27;
            val[slot_[static_cast<std::size_t>(ia) * S + static_cast<std::size_t>(code_of(d))]] += scale * k_ab;
          }
        }
      }
    }
  }

  ScalarField expand(const Eigen::VectorXd& w) const {
    ScalarField u{pb_.region.grid, std::vector<double>(pb_.region.grid.node_count(), 0.0)};
    for (std::size_t a = 0; a < nodes_.size(); ++a) u.values[nodes_[a]] = w[static_cast<Eigen::Index>(a)];
    return u;
  }

 private:
  void values(std::size_t base, const Eigen::VectorXd& w, double* v) const {
    for (int m = 0; m < corners_; ++m) {
      const int a = index_[base + off_[m]];
      v[m] = a >= 0 ? w[a] : 0.0;
    }
  }
  void corner_grad(const double* v, int m, double* G) const {
    for (int k = 0; k < n_; ++k) G[k] = (v[m | (1 << k)] - v[m & ~(1 << k)]) / h_;
  }
  void add(Eigen::VectorXd& g, std::size_t node, double x) const {
    const int a = index_[node];
    if (a >= 0) g[a] += x;
  }
  // Neighbour code of a flat offset d with components in {-1, 0, 1}.
  int code_of(long d) const {
    int digits[3] = {1, 1, 1};
    long rest = d;
    for (int k = n_ - 1; k >= 0; --k) {
      const long s = lat_.stride[k];
      const long q = rest >= 0 ? (rest + s / 2) / s : -((-rest + s / 2) / s);
      digits[k] = static_cast<int>(q) + 1;
      rest -= q * s;
    }
    int code = 0;
    for (int k = n_ - 1; k >= 0; --k) code = code * 3 + digits[k];
    return code;
  }

  const MixedBVP& pb_;
  Lattice lat_;
  int n_;
  double h_;
  std::array<std::size_t, 8> off_{};
  int corners_ = 4;
  double corner_weight_ = 0.0;
  std::vector<int> index_;
  std::vector<std::size_t> nodes_;
  std::vector<double> mass_, load_;
  std::vector<std::size_t> cells_;
  std::vector<int> slot_;
  double f_inf_ = 0.0;
};

double nodal_residual(const Eigen::VectorXd& g, const std::vector<double>& mass) {
  double r = 0.0;
  for (Eigen::Index a = 0; a < g.size(); ++a) r = std::max(r, std::abs(g[a]) / mass[static_cast<std::size_t>(a)]);
  return r;
}

}  // namespace

Solution solve_mixed(const MixedBVP& problem, const SolverOptions& opts) {
  problem.validate();
  Discretization d(problem);
  const auto N = static_cast<Eigen::Index>(d.size());
  Solution sol;
  sol.unknowns = d.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(N), g(N), step(N), trial(N);
  double E = d.energy(w);
  sol.energy_history.push_back(E);
  const double scale = std::max(1.0, d.f_inf());

  SpMat H;
  d.build_pattern(H);
  const bool direct = problem.region.grid.dim == 2;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt;
  if (direct) ldlt.analyzePattern(H);

  // Once energy decreases reach roundoff the Armijo test cannot tell steps
  // apart; from then on full Newton steps are taken while they reduce the
  // nodal residual. These polishing steps are not added to the energy history.
  bool polishing = false;
  for (int it = 0;; ++it) {
    d.gradient(w, g);
    sol.residual = nodal_residual(g, d.mass()) / scale;
    if (sol.residual < opts.residual_tol) break;
    if (it >= opts.max_iterations) {
      throw NumericError("solve_mixed: no convergence after " + std::to_string(it) + " Newton steps, residual " +
                         fmt12(sol.residual));
    }
    d.hessian(w, H);
    if (direct) {
      ldlt.factorize(H);
      if (ldlt.info() != Eigen::Success) throw NumericError("solve_mixed: Hessian factorization failed");
      step = ldlt.solve(-g);
    } else {
      Eigen::ConjugateGradient<SpMat, Eigen::Lower, Eigen::IncompleteCholesky<double, Eigen::Lower>> cg;
      cg.setTolerance(opts.cg_tol);
      cg.setMaxIterations(5000);
      cg.compute(H);
      step = cg.solve(-g);
      if (cg.info() == Eigen::NumericalIssue) throw NumericError("solve_mixed: preconditioner breakdown");
    }
    const double slope = g.dot(step);
    if (!(slope < 0.0)) break;  // no descent direction left at roundoff level
    if (polishing || -slope <= 1e-13 * std::max(1.0, std::abs(E))) {
      polishing = true;
      trial = w + step;
      d.gradient(trial, g);
      if (!(nodal_residual(g, d.mass()) / scale < sol.residual)) break;
      w.swap(trial);
      sol.iterations = it + 1;
      continue;
    }
    double alpha = 1.0;
    double E_new = E;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      trial = w + alpha * step;
      E_new = d.energy(trial);
      if (E_new <= E + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      polishing = true;
      continue;
    }
    w.swap(trial);
    const double drop = E - E_new;
    E = E_new;
    sol.energy_history.push_back(E);
    sol.iterations = it + 1;
    if (drop <= opts.energy_tol * std::abs(E)) polishing = true;
  }
  if (sol.residual > 1e3 * opts.residual_tol) {
    throw NumericError("solve_mixed: iteration stalled, residual " + fmt12(sol.residual));
  }
  sol.u = d.expand(w);
  return sol;
}

MonotoneProfile radial_profile_solution(const MonotoneProfile& f_star, double vol, int n, double kappa, int samples) {
  if (!(vol > 0.0) || !std::isfinite(vol)) throw InputError("radial_profile_solution: vol must be positive");
  if (!(kappa > 0.0)) throw InputError("radial_profile_solution: kappa must be positive");
  if (n < 2) throw InputError("radial_profile_solution: n must be at least 2");
  if (f_star.empty()) throw InputError("radial_profile_solution: empty source profile");
  if (samples < 2) throw InputError("radial_profile_solution: need at least 2 samples");

  const double alpha = -2.0 + 2.0 / n;
  // Antiderivative of r^beta.
  auto prim = [](double beta, double r) {
    if (std::abs(beta + 1.0) < 1e-14) return std::log(r);
    return std::pow(r, beta + 1.0) / (beta + 1.0);
  };

  // Segments of constant f_* between consecutive cut points inside [0, vol].
  std::vector<double> cuts{0.0};
  for (const auto& p : f_star.points()) {
    if (p.arg > 0.0 && p.arg < vol) cuts.push_back(p.arg);
  }
  cuts.push_back(vol);

  // I(s) = integral over [0, s] of r^alpha F(r), tabulated at the cuts.
  std::vector<double> Fcut(cuts.size(), 0.0), Icut(cuts.size(), 0.0);
  auto seg_integral = [&](std::size_t k, double a, double b) {
    const double v = f_star(0.5 * (cuts[k] + cuts[k + 1]));
    const double A = Fcut[k] - v * cuts[k];
    double s = v * (prim(alpha + 1.0, b) - prim(alpha + 1.0, a));
    if (A != 0.0) s += A * (prim(alpha, b) - prim(alpha, a));
    return s;
  };
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double v = f_star(0.5 * (cuts[k] + cuts[k + 1]));
    Fcut[k + 1] = Fcut[k] + v * (cuts[k + 1] - cuts[k]);
    Icut[k + 1] = Icut[k] + seg_integral(k, cuts[k], cuts[k + 1]);
  }
  auto I = [&](double s) {
    if (s <= 0.0) return 0.0;
    auto it = std::upper_bound(cuts.begin(), cuts.end(), s);
    std::size_t k = static_cast<std::size_t>(it - cuts.begin()) - 1;
    if (k + 1 >= cuts.size()) return Icut.back();
    return Icut[k] + seg_integral(k, cuts[k], s);
  };

  const double c = 1.0 / (n * n * std::pow(kappa, 2.0 / n));
  std::vector<double> s_pts;
  for (int k = 0; k < samples; ++k) s_pts.push_back(vol * k / (samples - 1));
  s_pts.insert(s_pts.end(), cuts.begin(), cuts.end());
  std::sort(s_pts.begin(), s_pts.end());
  s_pts.erase(std::unique(s_pts.begin(), s_pts.end()), s_pts.end());
  const double total = Icut.back();
  std::vector<double> z;
  z.reserve(s_pts.size());
  for (double s : s_pts) z.push_back(c * (total - I(s)));
  z.back() = 0.0;
  // Enforce monotonicity against roundoff.
  for (std::size_t k = z.size() - 1; k-- > 0;) z[k] = std::min(z[k], z[k + 1]);
  return MonotoneProfile::from_pairs(s_pts, z);
}

ScalarField explicit_radial_solution(double theta, double r, const GridSpec& grid) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("explicit_radial_solution: r must be positive");
  const GaugeSpec g = GaugeSpec::capillary(theta, grid.dim);
  const Lattice lat = Lattice::make(grid, ConeSpec::half_space(grid.dim));
  ScalarField u{grid, std::vector<double>(grid.node_count(), 0.0)};
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    const auto x = lat.position(i);
    const double rho = kernel::dual(g, x.data());
    u.values[i] = std::min(0.5 * (rho * rho - r * r), 0.0);
  }
  detail::check_not_truncated(lat, u.values, "explicit_radial_solution");
  return u;
}

ScalarField anisotropic_laplacian(const ScalarField& u, const GaugeSpec& g, const ConeSpec& cone) {
  u.validate();
  if (g.dim() != u.grid.dim) throw InputError("anisotropic_laplacian: gauge and grid dimensions differ");
  const Lattice lat = Lattice::make(u.grid, cone);
  const int n = lat.n;
  const double h = lat.h;
  const auto& v = u.values;
  ScalarField out{u.grid, std::vector<double>(u.grid.node_count(), 0.0)};
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    const auto m = lat.unflatten(i);
    bool inner = true;
    for (int k = 0; k < n; ++k) {
      const long lo = k == n - 1 ? lat.first_layer : 0;
      inner = inner && m[k] > lo && m[k] < lat.count[k] - 1;
    }
    if (!inner) continue;
    double div = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto sk = static_cast<std::size_t>(lat.stride[k]);
      for (int side = 0; side < 2; ++side) {
        // Face between a and a + e_k.
        const std::size_t a = side == 0 ? i : i - sk;
        const std::size_t b = a + sk;
        double G[3], q[3];
        for (int l = 0; l < n; ++l) {
          if (l == k) {
            G[l] = (v[b] - v[a]) / h;
          } else {
            const auto sl = static_cast<std::size_t>(lat.stride[l]);
            G[l] = (v[a + sl] - v[a - sl] + v[b + sl] - v[b - sl]) / (4.0 * h);
          }
        }
        kernel::half_square_grad(g, G, q);
        div += (side == 0 ? 1.0 : -1.0) * q[k] / h;
      }
    }
    out.values[i] = div;
  }
  return out;
}

double wall_conormal_flux(const ScalarField& u, const GaugeSpec& g, const RegionSpec& region) {
  u.validate();
  region.validate();
  if (!(u.grid == region.grid)) throw InputError("wall_conormal_flux: field and region grids differ");
  const Lattice lat = Lattice::make(u.grid, ConeSpec::half_space(u.grid.dim));
  const detail::NodalGradient grad{lat, u.values};
  const int n = lat.n;
  double sum = 0.0;
  std::size_t count = 0;
  const std::size_t b = lat.node_begin();
  for (std::size_t i = b; i < b + static_cast<std::size_t>(lat.stride[n - 1]); ++i) {
    if (!(region.phi[i] < 0.0)) continue;
    double G[3], q[3];
    grad(i, G);
    kernel::half_square_grad(g, G, q);
    sum += std::abs(q[n - 1]);
    ++count;
  }
  if (count == 0) throw InputError("wall_conormal_flux: Omega does not touch the wall");
  return sum / static_cast<double>(count);
}

ComparisonReport talenti_compare(const MixedBVP& problem, const ComparisonOptions& opts) {
  problem.validate();
  const GaugeSpec& g = problem.gauge;
  const GridSpec& grid = problem.region.grid;
  const int n = grid.dim;
  const Lattice lat = Lattice::make(grid, problem.cone);

  ComparisonReport rep;
  rep.tolerance = opts.tolerance;
  rep.u = solve_mixed(problem, opts.solver).u;
  Symmetrization sym = symmetrize(rep.u, g, problem.cone, opts.levels);
  rep.u_star = std::move(sym.field);
  rep.kappa = sym.kappa;
  rep.volume = grid_volume(problem.region, problem.cone);
  rep.star_radius = std::pow(rep.volume / rep.kappa, 1.0 / n);

  RegionSpec star{grid, std::vector<double>(grid.node_count(), 1.0)};
  ScalarField f_omega{grid, std::vector<double>(grid.node_count(), 0.0)};
  std::vector<double> rho(grid.node_count(), 0.0);
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    const auto x = lat.position(i);
    rho[i] = kernel::dual(g, x.data());
    star.phi[i] = rho[i] - rep.star_radius;
    if (problem.region.phi[i] < 0.0) f_omega.values[i] = problem.source.values[i];
  }
  const MonotoneProfile f_low = rearranged_source(f_omega, problem.cone);
  MixedBVP sym_problem;
  sym_problem.region = star;
  sym_problem.source = {grid, std::vector<double>(grid.node_count(), 0.0)};
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    sym_problem.source.values[i] = std::min(f_low(rep.kappa * std::pow(rho[i], n)), 0.0);
  }
  sym_problem.flux = OperatorSpec::gauge();
  sym_problem.gauge = g;
  sym_problem.cone = problem.cone;
  rep.z = solve_mixed(sym_problem, opts.solver).u;

  const MonotoneProfile z_low = radial_profile_solution(f_low, rep.volume, n, rep.kappa);
  rep.z_profile = radial_field(z_low, g, problem.cone, grid);

  rep.slack = {grid, std::vector<double>(grid.node_count(), 0.0)};
  double z_inf = 0.0, mismatch = 0.0, u_inf = 0.0;
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    z_inf = std::max(z_inf, std::abs(rep.z.values[i]));
    u_inf = std::max(u_inf, std::abs(rep.u.values[i]));
    mismatch = std::max(mismatch, std::abs(rep.z.values[i] - rep.z_profile.values[i]));
  }
  rep.z_linf = z_inf;
  rep.linf_u = u_inf;
  rep.profile_mismatch = z_inf > 0.0 ? mismatch / z_inf : 0.0;
  rep.linf_bound = 0.5 * std::pow(rep.volume / rep.kappa, 2.0 / n);

  rep.min_slack = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t inside = 0;
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    const double s = rep.u_star.values[i] - rep.z.values[i];
    rep.slack.values[i] = s;
    rep.min_slack = std::min(rep.min_slack, s);
    if (s < -opts.tolerance * z_inf) ++rep.violations;
    if (star.phi[i] < 0.0) {
      sum += s;
      ++inside;
    }
  }
  rep.mean_slack = inside > 0 ? sum / static_cast<double>(inside) : 0.0;
  return rep;
}

LinftyReport linfty_bound_check(const MixedBVP& problem, const SolverOptions& opts, double tolerance) {
  problem.validate();
  const int n = problem.region.grid.dim;
  const Lattice lat = Lattice::make(problem.region.grid, problem.cone);
  for (std::size_t i = lat.node_begin(); i < lat.node_end(); ++i) {
    if (problem.region.phi[i] < 0.0 && std::abs(problem.source.values[i] + n) > 1e-12) {
      throw PreconditionError("linfty_bound_check: the bound needs f = -n in Omega");
    }
  }
  LinftyReport rep;
  const Solution sol = solve_mixed(problem, opts);
  for (double v : sol.u.values) rep.linf = std::max(rep.linf, std::abs(v));
  rep.volume = grid_volume(problem.region, problem.cone);
  const double kappa = wulff_sector_volume(problem.gauge, problem.cone).kappa;
  rep.bound = 0.5 * std::pow(rep.volume / kappa, 2.0 / n);
  const IsoperimetricReport iso = isoperimetric_check(problem.region, problem.gauge, problem.cone);
  rep.iso_slack = iso.slack / iso.bound;
  rep.respected = rep.linf <= rep.bound * (1.0 + tolerance);
  rep.tight = rep.iso_slack <= 0.02 && std::abs(rep.linf - rep.bound) <= tolerance * rep.bound;
  return rep;
}

}  // namespace capsym
