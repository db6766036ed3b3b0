#include "capsym/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "capsym/acceptance.hpp"
#include "capsym/energy.hpp"
#include "capsym/error.hpp"
#include "capsym/field_io.hpp"
#include "capsym/gauge.hpp"
#include "capsym/geometry.hpp"
#include "capsym/rearrange.hpp"
#include "format.hpp"

namespace capsym {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, std::size_t line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("value of '" + key + "' is not a finite number: '" + v + "'", line);
  }
}

int parse_int(const std::string& v, std::size_t line, const std::string& key) {
  try {
    std::size_t used = 0;
    const int d = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("value of '" + key + "' is not an integer: '" + v + "'", line);
  }
}

// Key-value report with 12 significant digits.
class Report {
 public:
  void add(const std::string& key, double v) { lines_.push_back(key + "=" + fmt12(v)); }
  void add(const std::string& key, const std::string& v) { lines_.push_back(key + "=" + v); }
  void add(const std::string& key, bool v) { lines_.push_back(key + "=" + (v ? "true" : "false")); }
  void add_count(const std::string& key, std::size_t v) { lines_.push_back(key + "=" + std::to_string(v)); }
  std::string str() const {
    std::string s;
    for (const auto& l : lines_) s += l + "\n";
    return s;
  }

 private:
  std::vector<std::string> lines_;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + fmt12(v[k]);
  return s;
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw InputError("cannot parse vector component '" + tok + "'");
    out.push_back(v);
  }
  if (out.size() < 2) throw InputError("vector needs at least 2 comma-separated components");
  return out;
}

ConeSpec parse_cone(const std::string& name, int dim) {
  if (name == "half") return ConeSpec::half_space(dim);
  if (name == "full") return ConeSpec::full_space(dim);
  throw InputError("cone must be 'half' or 'full', got '" + name + "'");
}

void ensure_distinct(const fs::path& output, const std::vector<fs::path>& inputs) {
  const fs::path o = fs::weakly_canonical(output);
  for (const auto& in : inputs) {
    if (fs::weakly_canonical(in) == o) throw InputError("output " + output.string() + " would overwrite an input");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write " + path.string());
  os << text;
}

double sublevel_volume(const ScalarField& u, double t, const ConeSpec& cone) {
  RegionSpec r{u.grid, u.values};
  for (double& v : r.phi) v -= t;
  return grid_volume(r, cone);
}

// Largest relative gap between sublevel volumes of u and u_star at 20 levels
// between 5% and 95% of the depth of u.
double equimeasure_gap(const ScalarField& u, const ScalarField& us, const ConeSpec& cone) {
  double umin = 0.0;
  for (double v : u.values) umin = std::min(umin, v);
  if (umin == 0.0) return 0.0;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double t = umin * (0.95 - 0.9 * k / 19.0);
    const double a = sublevel_volume(u, t, cone);
    if (a > 0.0) worst = std::max(worst, std::abs(a - sublevel_volume(us, t, cone)) / a);
  }
  return worst;
}

std::string profile_csv(const MonotoneProfile& p, const std::string& arg, const std::string& val) {
  std::ostringstream os;
  p.write_csv(os, arg, val);
  return os.str();
}

}  // namespace

ProblemFile load_problem(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file " + path.string());
  const fs::path dir = path.parent_path();
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::string line;
  std::size_t lineno = 0;
  static const char* known[] = {"region",         "theta",       "source",       "source_file", "flux",
                                "flux_c",         "flux_c_file", "max_iterations", "residual_tol", "energy_tol",
                                "tolerance",      "levels"};
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ParseError("unknown key '" + key + "'", lineno);
    }
    if (kv.count(key)) throw ParseError("duplicate key '" + key + "'", lineno);
    kv[key] = {val, lineno};
  }
  auto need = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("missing required key '" + key + "'", lineno);
    return it->second;
  };
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : dir / p; };

  ProblemFile pf;
  const fs::path region_path = resolve(need("region").first);
  pf.inputs.push_back(region_path);
  RegionSpec region = load_region(region_path);
  const int n = region.grid.dim;
  const auto& th = need("theta");
  const GaugeSpec g = GaugeSpec::capillary(parse_double(th.first, th.second, "theta"), n);

  if (kv.count("source") && kv.count("source_file")) {
    throw ParseError("give either 'source' or 'source_file', not both", kv["source_file"].second);
  }
  MixedBVP& pb = pf.problem;
  if (kv.count("source_file")) {
    const fs::path sp = resolve(kv["source_file"].first);
    pf.inputs.push_back(sp);
    pb = MixedBVP::constant_source(region, 0.0, g);
    pb.source = load_field(sp);
  } else {
    const auto& s = need("source");
    pb = MixedBVP::constant_source(region, parse_double(s.first, s.second, "source"), g);
  }
  const std::string flux = kv.count("flux") ? kv["flux"].first : "gauge";
  if (flux == "scaled") {
    if (kv.count("flux_c_file")) {
      const fs::path cp = resolve(kv["flux_c_file"].first);
      pf.inputs.push_back(cp);
      pb.flux = OperatorSpec::scaled(load_field(cp));
    } else {
      const auto& c = need("flux_c");
      const double cv = parse_double(c.first, c.second, "flux_c");
      pb.flux = OperatorSpec::scaled({region.grid, std::vector<double>(region.grid.node_count(), cv)});
    }
  } else if (flux != "gauge") {
    throw ParseError("flux must be 'gauge' or 'scaled', got '" + flux + "'", kv["flux"].second);
  }
  if (kv.count("max_iterations")) {
    pf.solver.max_iterations = parse_int(kv["max_iterations"].first, kv["max_iterations"].second, "max_iterations");
  }
  if (kv.count("residual_tol")) {
    pf.solver.residual_tol = parse_double(kv["residual_tol"].first, kv["residual_tol"].second, "residual_tol");
  }
  if (kv.count("energy_tol")) {
    pf.solver.energy_tol = parse_double(kv["energy_tol"].first, kv["energy_tol"].second, "energy_tol");
  }
  if (kv.count("tolerance")) {
    pf.compare.tolerance = parse_double(kv["tolerance"].first, kv["tolerance"].second, "tolerance");
  }
  if (kv.count("levels")) pf.compare.levels = parse_int(kv["levels"].first, kv["levels"].second, "levels");
  pf.compare.solver = pf.solver;
  return pf;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capillary Schwarz symmetrization toolkit", "capsym"};
  app.require_subcommand(1);
  int status = exit_ok;
  std::function<void()> action;

  double theta = std::numbers::pi / 2;
  std::string cone_name = "half";
  int dim = 2;
  int levels = default_levels;
  double p = 2.0;
  double tolerance = -1.0;
  std::string input, output, region_path, problem_path, report_dir, profile_path;

  // gauge
  auto* gauge_cmd = app.add_subcommand("gauge", "evaluate the capillary gauge or its dual at a point");
  std::string eval;
  bool want_dual = false, want_grad = false;
  gauge_cmd->add_option("--theta", theta, "contact angle in radians")->required();
  gauge_cmd->add_option("--eval", eval, "comma-separated point")->required();
  gauge_cmd->add_flag("--dual", want_dual, "evaluate the dual gauge");
  gauge_cmd->add_flag("--grad", want_grad, "also print the gradient");
  gauge_cmd->callback([&] {
    action = [&] {
      const auto x = parse_vector(eval);
      const GaugeSpec g = GaugeSpec::capillary(theta, static_cast<int>(x.size()));
      Report r;
      r.add("value", want_dual ? dual_eval(g, x) : gauge_eval(g, x));
      if (want_grad) r.add("grad", join(want_dual ? dual_grad(g, x) : gauge_grad(g, x)));
      out << r.str();
    };
  });

  // volume
  auto* volume_cmd = app.add_subcommand("volume", "volume of the unit Wulff ball inside a cone");
  std::string method = "analytic";
  MonteCarloOptions mc;
  volume_cmd->add_option("--theta", theta, "contact angle in radians")->required();
  volume_cmd->add_option("--dim", dim, "dimension")->check(CLI::Range(2, 8));
  volume_cmd->add_option("--cone", cone_name, "half or full");
  volume_cmd->add_option("--method", method, "analytic or montecarlo");
  volume_cmd->add_option("--samples", mc.samples, "Monte Carlo samples");
  volume_cmd->add_option("--seed", mc.seed, "Monte Carlo seed");
  volume_cmd->callback([&] {
    action = [&] {
      VolumeMethod vm;
      if (method == "analytic") {
        vm = VolumeMethod::analytic;
      } else if (method == "montecarlo") {
        vm = VolumeMethod::montecarlo;
      } else {
        throw InputError("method must be 'analytic' or 'montecarlo'");
      }
      const SectorConstants s =
          wulff_sector_volume(GaugeSpec::capillary(theta, dim), parse_cone(cone_name, dim), vm, mc);
      Report r;
      r.add("kappa", s.kappa);
      r.add("omega", s.omega);
      if (vm == VolumeMethod::montecarlo) {
        r.add("kappa_stderr", s.kappa_stderr);
        r.add("omega_stderr", s.omega_stderr);
        r.add_count("samples", s.samples);
        r.add_count("seed", s.seed);
      }
      out << r.str();
    };
  });

  // isoperimetric
  auto* iso_cmd = app.add_subcommand("isoperimetric", "measure a region and check the isoperimetric inequality");
  iso_cmd->add_option("--theta", theta, "contact angle in radians")->required();
  iso_cmd->add_option("--region", region_path, "region field file")->required();
  iso_cmd->add_option("--cone", cone_name, "half or full");
  iso_cmd->add_option("--tolerance", tolerance, "allowed negative slack relative to the bound (default 0.02)");
  iso_cmd->callback([&] {
    action = [&] {
      const RegionSpec region = load_region(region_path);
      const int n = region.grid.dim;
      const GaugeSpec g = GaugeSpec::capillary(theta, n);
      const ConeSpec cone = parse_cone(cone_name, n);
      const double tol = tolerance < 0.0 ? 0.02 : tolerance;
      const RegionMeasures m = measure_region(region, g, cone);
      const IsoperimetricReport iso = isoperimetric_check(region, g, cone);
      Report r;
      r.add("volume", m.volume);
      r.add("perimeter", m.perimeter);
      r.add("wetting", m.wetting);
      r.add("anisotropic_perimeter", m.anisotropic_perimeter);
      r.add("free_energy", m.perimeter - g.cos_theta() * m.wetting);
      r.add("ratio", iso.ratio);
      r.add("bound", iso.bound);
      r.add("slack", iso.slack);
      r.add("relative_slack", iso.slack / iso.bound);
      const bool ok = iso.slack >= -tol * iso.bound;
      r.add("holds", ok);
      out << r.str();
      if (!ok) status = exit_failed;
    };
  });

  // symmetrize
  auto* sym_cmd = app.add_subcommand("symmetrize", "capillary (convex) symmetrization of a non-positive field");
  sym_cmd->add_option("--theta", theta, "contact angle in radians")->required();
  sym_cmd->add_option("--input", input, "input field file")->required();
  sym_cmd->add_option("--output", output, "output field file")->required();
  sym_cmd->add_option("--cone", cone_name, "half or full");
  sym_cmd->add_option("--levels", levels, "number of thresholds")->check(CLI::PositiveNumber);
  sym_cmd->add_option("--profile", profile_path, "write u_* as CSV");
  sym_cmd->add_option("--tolerance", tolerance, "allowed relative sublevel volume gap (default 0.01)");
  sym_cmd->callback([&] {
    action = [&] {
      ensure_distinct(output, {input});
      if (!profile_path.empty()) ensure_distinct(profile_path, {input});
      const ScalarField u = load_field(input);
      const int n = u.grid.dim;
      const ConeSpec cone = parse_cone(cone_name, n);
      const Symmetrization s = symmetrize(u, GaugeSpec::capillary(theta, n), cone, levels);
      save_field(output, s.field);
      if (!profile_path.empty()) write_text(profile_path, profile_csv(s.rearranged, "s", "u_star"));
      const double tol = tolerance < 0.0 ? 0.01 : tolerance;
      const double gap = equimeasure_gap(u, s.field, cone);
      Report r;
      r.add("kappa", s.kappa);
      r.add("support_volume", s.mu.points().back().value);
      r.add("max_volume_gap", gap);
      r.add("equimeasurable", gap <= tol);
      out << r.str();
      if (gap > tol) status = exit_failed;
    };
  });

  // polya-szego
  auto* ps_cmd = app.add_subcommand("polya-szego", "compare the energy of a field with that of its symmetrization");
  ps_cmd->add_option("--theta", theta, "contact angle in radians")->required();
  ps_cmd->add_option("--input", input, "input field file")->required();
  ps_cmd->add_option("--p", p, "exponent >= 1")->required();
  ps_cmd->add_option("--cone", cone_name, "half or full");
  ps_cmd->add_option("--levels", levels, "number of thresholds")->check(CLI::PositiveNumber);
  ps_cmd->add_option("--tolerance", tolerance, "allowed violation relative to lhs (default 0.02)");
  ps_cmd->callback([&] {
    action = [&] {
      const ScalarField u = load_field(input);
      const int n = u.grid.dim;
      const double tol = tolerance < 0.0 ? 0.02 : tolerance;
      const PolyaSzegoReport ps =
          polya_szego_report(u, GaugeSpec::capillary(theta, n), p, parse_cone(cone_name, n), tol, levels);
      Report r;
      r.add("lhs", ps.lhs);
      r.add("rhs", ps.rhs);
      r.add("rhs_closed_form", ps.rhs_closed_form);
      r.add("slack", ps.slack);
      r.add("holds", ps.holds);
      out << r.str();
      if (!ps.holds) status = exit_failed;
    };
  });

  // sobolev
  auto* sob_cmd = app.add_subcommand("sobolev", "sharp Sobolev constant and extremal in the half-space");
  sob_cmd->add_option("--theta", theta, "contact angle in radians")->required();
  sob_cmd->add_option("--p", p, "exponent in (1, n)")->required();
  sob_cmd->add_option("--dim", dim, "dimension")->check(CLI::Range(2, 3));
  sob_cmd->add_option("--input", input, "field whose quotient is checked against the constant");
  sob_cmd->add_option("--tolerance", tolerance, "allowed excess of the quotient over C (default 0.01)");
  sob_cmd->callback([&] {
    action = [&] {
      int n = dim;
      ScalarField u;
      if (!input.empty()) {
        u = load_field(input);
        n = u.grid.dim;
      }
      const SobolevExtremal e = sobolev_extremal(theta, p, n);
      Report r;
      r.add("kappa", e.kappa);
      r.add("sigma", e.sigma);
      r.add("constant", e.constant);
      r.add("sigma_alt", e.sigma_alt);
      r.add("constant_alt", e.constant_alt);
      r.add("residual", e.residual);
      r.add("residual_alt", e.residual_alt);
      if (!input.empty()) {
        const double tol = tolerance < 0.0 ? 0.01 : tolerance;
        const double q = sobolev_quotient(u, theta, p);
        r.add("quotient", q);
        r.add("quotient_over_constant", q / e.constant);
        const bool ok = q <= e.constant * (1.0 + tol);
        r.add("holds", ok);
        if (!ok) status = exit_failed;
      }
      out << r.str();
    };
  });

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve a mixed boundary-value problem");
  solve_cmd->add_option("--problem", problem_path, "problem description file")->required();
  solve_cmd->add_option("--output", output, "solution field file")->required();
  solve_cmd->add_option("--report", report_dir, "directory for report.txt and energy.csv");
  solve_cmd->callback([&] {
    action = [&] {
      const ProblemFile pf = load_problem(problem_path);
      std::vector<fs::path> inputs = pf.inputs;
      inputs.push_back(problem_path);
      ensure_distinct(output, inputs);
      const Solution sol = solve_mixed(pf.problem, pf.solver);
      save_field(output, sol.u);
      double umax = -std::numeric_limits<double>::infinity(), umin = 0.0;
      for (double v : sol.u.values) {
        umax = std::max(umax, v);
        umin = std::min(umin, v);
      }
      Report r;
      r.add_count("unknowns", sol.unknowns);
      r.add_count("iterations", static_cast<std::size_t>(sol.iterations));
      r.add("residual", sol.residual);
      r.add("energy", sol.energy_history.back());
      r.add("min_u", umin);
      r.add("max_u", umax);
      out << r.str();
      if (!report_dir.empty()) {
        fs::create_directories(report_dir);
        write_text(fs::path(report_dir) / "report.txt", r.str());
        std::string csv = "iteration,energy\n";
        for (std::size_t k = 0; k < sol.energy_history.size(); ++k) {
          csv += std::to_string(k) + "," + fmt12(sol.energy_history[k]) + "\n";
        }
        write_text(fs::path(report_dir) / "energy.csv", csv);
      }
    };
  });

  // talenti
  auto* tal_cmd = app.add_subcommand("talenti", "run the comparison pipeline on a problem");
  tal_cmd->add_option("--problem", problem_path, "problem description file")->required();
  tal_cmd->add_option("--report", report_dir, "output directory")->required();
  tal_cmd->callback([&] {
    action = [&] {
      const ProblemFile pf = load_problem(problem_path);
      const fs::path dir(report_dir);
      fs::create_directories(dir);
      const char* files[] = {"report.txt",      "slack.field",     "u.field",        "ustar.field",
                             "z.field",         "z_profile.field", "u_rearranged.csv", "z_rearranged.csv"};
      std::vector<fs::path> inputs = pf.inputs;
      inputs.push_back(problem_path);
      for (const char* f : files) ensure_distinct(dir / f, inputs);

      const ComparisonReport c = talenti_compare(pf.problem, pf.compare);
      const GridSpec& grid = pf.problem.region.grid;
      Report r;
      r.add("dim", static_cast<double>(grid.dim));
      r.add("L", grid.half_extent);
      r.add("h", grid.spacing);
      r.add("theta", pf.problem.gauge.theta());
      r.add("flux", pf.problem.flux.kind == FluxKind::gauge_flux ? std::string("gauge") : std::string("scaled"));
      r.add("volume", c.volume);
      r.add("kappa", c.kappa);
      r.add("star_radius", c.star_radius);
      r.add("z_linf", c.z_linf);
      r.add("min_slack", c.min_slack);
      r.add("mean_slack", c.mean_slack);
      r.add("tolerance", c.tolerance);
      r.add("slack_floor", -c.tolerance * c.z_linf);
      r.add_count("violations", c.violations);
      r.add("profile_mismatch", c.profile_mismatch);
      r.add("linf_u", c.linf_u);
      r.add("linf_bound", c.linf_bound);
      r.add("holds", c.violations == 0);
      write_text(dir / "report.txt", r.str());
      save_field(dir / "slack.field", c.slack);
      save_field(dir / "u.field", c.u);
      save_field(dir / "ustar.field", c.u_star);
      save_field(dir / "z.field", c.z);
      save_field(dir / "z_profile.field", c.z_profile);
      const ConeSpec& cone = pf.problem.cone;
      const int lv = pf.compare.levels;
      write_text(dir / "u_rearranged.csv",
                 profile_csv(increasing_rearrangement(distribution_function(c.u, cone, lv)), "s", "u_star"));
      write_text(dir / "z_rearranged.csv",
                 profile_csv(increasing_rearrangement(distribution_function(c.z, cone, lv)), "s", "z_star"));
      out << r.str();
      if (c.violations > 0) status = exit_failed;
    };
  });

  // suite
  auto* suite_cmd = app.add_subcommand("suite", "run the acceptance battery");
  std::vector<int> only;
  std::uint64_t seed = acceptance::Options{}.seed;
  suite_cmd->add_option("--only", only, "criterion ids to run")->delimiter(',')->check(CLI::Range(1, 12));
  suite_cmd->add_option("--seed", seed, "corpus seed");
  suite_cmd->add_option("--report", report_dir, "directory for suite.txt");
  suite_cmd->callback([&] {
    action = [&] {
      acceptance::Options opts;
      opts.seed = seed;
      std::string table;
      int failed = 0;
      acceptance::run_all(opts, only, [&](const acceptance::Criterion& c) {
        const std::string line = acceptance::format_line(c);
        out << line << std::endl;
        table += line + "\n";
        if (!c.passed) ++failed;
      });
      const std::string summary = std::to_string(failed) + " criteria failed\n";
      out << summary;
      if (!report_dir.empty()) {
        fs::create_directories(report_dir);
        write_text(fs::path(report_dir) / "suite.txt", table + summary);
      }
      if (failed > 0) status = exit_failed;
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_input;
  }

  try {
    if (action) action();
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return exit_failed;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_input;
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return exit_input;
  }
  return status;
}

}  // namespace capsym
