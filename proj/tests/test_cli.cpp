#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "capsym/cli.hpp"
#include "capsym/error.hpp"
#include "capsym/field_io.hpp"
#include "capsym/geometry.hpp"

using namespace capsym;
namespace fs = std::filesystem;

namespace {

const fs::path demo = CAPSYM_DEMO_DIR;

struct Run {
  int status;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run_command(args, out, err);
  return {status, out.str(), err.str()};
}

std::map<std::string, std::string> parse_report(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

double sublevel(const ScalarField& u, double t) {
  RegionSpec r{u.grid, u.values};
  for (double& v : r.phi) v -= t;
  return grid_volume(r, ConeSpec::half_space(u.grid.dim));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("gauge command") {
    const auto r = run({"gauge", "--theta", "1.0471975512", "--eval", "0,1"});
    CHECK(r.status == 0);
    CHECK(r.out == "value=0.500000000003\n");
    const auto d = run({"gauge", "--theta", "1.0471975512", "--eval", "0,1", "--dual", "--grad"});
    CHECK(std::stod(parse_report(d.out).at("value")) == doctest::Approx(2.0));
    CHECK(parse_report(d.out).count("grad") == 1);
    CHECK(run({"gauge", "--theta", "0", "--eval", "0,1"}).status == 2);
    CHECK(run({"gauge", "--theta", "1", "--eval", "0,x"}).status == 2);
  }

  TEST_CASE("usage errors") {
    auto r = run({"frobnicate"});
    CHECK(r.status == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(run({}).status == 2);
    CHECK(run({"volume", "--dim", "2"}).status == 2);
    CHECK(run({"--help"}).status == 0);
  }

  TEST_CASE("volume command") {
    const auto r = parse_report(run({"volume", "--theta", "1.0471975512", "--dim", "3"}).out);
    CHECK(std::stod(r.at("kappa")) == doctest::Approx(0.654498469505).epsilon(1e-11));
    const auto m = run({"volume", "--theta", "1.0471975512", "--dim", "2", "--method", "montecarlo", "--samples", "20000"});
    CHECK(m.status == 0);
    CHECK(parse_report(m.out).at("seed") == "20240229");
    CHECK(run({"volume", "--theta", "1", "--method", "exact"}).status == 2);
  }

  TEST_CASE("isoperimetric command on the demo region") {
    const auto r = run({"isoperimetric", "--theta", "1.0471975512", "--region", (demo / "omega.field").string()});
    CHECK(r.status == 0);
    const auto kv = parse_report(r.out);
    CHECK(kv.at("holds") == "true");
    CHECK(std::stod(kv.at("slack")) > 0.0);
  }

  TEST_CASE("symmetrize command writes an equimeasurable field") {
    TempDir tmp("capsym_cli_sym");
    const auto in = demo / "u.field", out = tmp.path / "ustar.field";
    const auto r = run({"symmetrize", "--theta", "1.5707963268", "--input", in.string(), "--output", out.string(),
                        "--profile", (tmp.path / "ustar.csv").string()});
    CHECK(r.status == 0);
    CHECK(parse_report(r.out).at("equimeasurable") == "true");
    const auto u = load_field(in), us = load_field(out);
    for (double t : {-0.8, -0.5, -0.2}) CHECK(sublevel(us, t) == doctest::Approx(sublevel(u, t)).epsilon(0.01));
    CHECK(slurp(tmp.path / "ustar.csv").rfind("s,u_star\n", 0) == 0);
    // refusing to overwrite the input
    CHECK(run({"symmetrize", "--theta", "1", "--input", in.string(), "--output", in.string()}).status == 2);
  }

  TEST_CASE("malformed field files give exit 2 with a line number") {
    TempDir tmp("capsym_cli_bad");
    {
      std::ofstream bad(tmp.path / "bad.field");
      bad << "capsym-field v1 dim=2 L=1 h=1 order=rowmajor-xn-slowest\n0 0 0\n0 -1 nan\n";
    }
    const auto r = run({"symmetrize", "--theta", "1", "--input", (tmp.path / "bad.field").string(), "--output",
                        (tmp.path / "o.field").string()});
    CHECK(r.status == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp.path / "o.field"));
  }

  TEST_CASE("polya-szego and sobolev commands") {
    const auto in = (demo / "u.field").string();
    const auto ps = run({"polya-szego", "--theta", "1.0471975512", "--input", in, "--p", "2"});
    CHECK(ps.status == 0);
    CHECK(parse_report(ps.out).at("holds") == "true");
    const auto sob = run({"sobolev", "--theta", "1.0471975512", "--p", "1.2", "--dim", "2"});
    CHECK(sob.status == 0);
    CHECK(std::stod(parse_report(sob.out).at("sigma")) == doctest::Approx(0.655878652557).epsilon(1e-9));
    const auto q = run({"sobolev", "--theta", "1.0471975512", "--p", "1.5", "--input", in});
    CHECK(q.status == 0);
    CHECK(parse_report(q.out).at("holds") == "true");
    CHECK(run({"sobolev", "--theta", "1", "--p", "2.5", "--dim", "2"}).status == 2);
  }

  TEST_CASE("solve command") {
    TempDir tmp("capsym_cli_solve");
    const auto r = run({"solve", "--problem", (demo / "prob.cfg").string(), "--output", (tmp.path / "u.field").string(),
                        "--report", (tmp.path / "rep").string()});
    CHECK(r.status == 0);
    const auto u = load_field(tmp.path / "u.field");
    CHECK(*std::max_element(u.values.begin(), u.values.end()) <= 0.0);
    CHECK(slurp(tmp.path / "rep" / "report.txt") == r.out);
    CHECK(slurp(tmp.path / "rep" / "energy.csv").rfind("iteration,energy\n0,0\n", 0) == 0);
  }

  TEST_CASE("talenti command on the shipped demo problems") {
    for (const char* cfg : {"prob.cfg", "prob_scaled.cfg"}) {
      TempDir tmp("capsym_cli_talenti");
      const auto r = run({"talenti", "--problem", (demo / cfg).string(), "--report", tmp.path.string()});
      CHECK(r.status == 0);
      const auto kv = parse_report(slurp(tmp.path / "report.txt"));
      CHECK(std::stod(kv.at("min_slack")) >= -0.03 * std::stod(kv.at("z_linf")));
      CHECK(kv.at("violations") == "0");
      for (const char* f : {"slack.field", "u.field", "ustar.field", "z.field", "z_profile.field"}) {
        CHECK_NOTHROW(load_field(tmp.path / f));
      }
      CHECK(slurp(tmp.path / "z_rearranged.csv").rfind("s,z_star\n", 0) == 0);
    }
  }

  TEST_CASE("reports are deterministic") {
    TempDir a("capsym_cli_det_a"), b("capsym_cli_det_b");
    const auto cfg = (demo / "prob_scaled.cfg").string();
    run({"talenti", "--problem", cfg, "--report", a.path.string()});
    run({"talenti", "--problem", cfg, "--report", b.path.string()});
    for (const char* f : {"report.txt", "slack.field", "z_rearranged.csv"}) CHECK(slurp(a.path / f) == slurp(b.path / f));
    const auto v1 = run({"volume", "--theta", "2", "--method", "montecarlo", "--samples", "5000", "--seed", "3"});
    const auto v2 = run({"volume", "--theta", "2", "--method", "montecarlo", "--samples", "5000", "--seed", "3"});
    CHECK(v1.out == v2.out);
  }

  TEST_CASE("problem files") {
    TempDir tmp("capsym_cli_cfg");
    fs::copy_file(demo / "omega.field", tmp.path / "omega.field");
    auto write = [&](const std::string& text) {
      std::ofstream(tmp.path / "p.cfg") << text;
      return tmp.path / "p.cfg";
    };
    auto pf = load_problem(write("# comment\nregion = omega.field\ntheta = 1.2  # angle\nsource = -1.5\nlevels = 64\n"));
    CHECK(pf.problem.gauge.theta() == 1.2);
    CHECK(pf.compare.levels == 64);
    CHECK(pf.problem.flux.kind == FluxKind::gauge_flux);
    pf = load_problem(write("region = omega.field\ntheta = 1\nsource = -1\nflux = scaled\nflux_c = 0.5\n"));
    CHECK(pf.problem.flux.kind == FluxKind::scaled_gauge_flux);
    CHECK(pf.problem.flux.c.values.front() == 0.5);
    auto line_of = [&](const std::string& text) -> std::size_t {
      try {
        load_problem(write(text));
      } catch (const ParseError& e) {
        return e.line();
      }
      return 0;
    };
    CHECK(line_of("region = omega.field\ntheta = 1\nsource = -1\ncolour = red\n") == 4);
    CHECK(line_of("region = omega.field\ntheta = one\nsource = -1\n") == 2);
    CHECK(line_of("region = omega.field\ntheta = 1\nsource = -1\nflux = weird\n") == 4);
    CHECK(line_of("region = omega.field\nsource = -1\n") > 0);
    CHECK(line_of("region = omega.field\ntheta = 1\ntheta = 2\n") == 3);
    CHECK_THROWS_AS(load_problem(write("region = nowhere.field\ntheta = 1\nsource = -1\n")), InputError);
    const auto r = run({"solve", "--problem", write("region = omega.field\ntheta = 1\nsource = 1\n").string(), "--output",
                        (tmp.path / "u.field").string()});
    CHECK(r.status == 2);
    CHECK(run({"solve", "--problem", (tmp.path / "p.cfg").string(), "--output", (tmp.path / "omega.field").string()})
              .status == 2);
  }

  TEST_CASE("verification failures exit with 1") {
    // a very tight tolerance turns the discretization error of the comparison into a failure
    TempDir tmp("capsym_cli_fail");
    fs::copy_file(demo / "omega.field", tmp.path / "omega.field");
    std::ofstream(tmp.path / "p.cfg") << "region = omega.field\ntheta = 1.0471975512\nsource = -2\ntolerance = 0\n";
    const auto r = run({"talenti", "--problem", (tmp.path / "p.cfg").string(), "--report", (tmp.path / "out").string()});
    CHECK(r.status == 1);
    CHECK(parse_report(r.out).at("holds") == "false");
    const auto sym = run({"symmetrize", "--theta", "1", "--input", (demo / "u.field").string(), "--output",
                          (tmp.path / "s.field").string(), "--tolerance", "0"});
    CHECK(sym.status == 1);
  }

  TEST_CASE("suite command") {
    const auto r = run({"suite", "--only", "1,2"});
    CHECK(r.status == 0);
    CHECK(r.out.find("PASS  1") != std::string::npos);
    CHECK(r.out.find("0 criteria failed") != std::string::npos);
    CHECK(run({"suite", "--only", "13"}).status == 2);
  }
}
