#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "cli_app.hpp"
#include "optomw/errors.hpp"
#include "optomw/report.hpp"
#include "optomw/sweep.hpp"

using namespace optomw;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "optomw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = optomw::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("optomw_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    if (!header) {
      header = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

SweepSpec small_spec(SweepAxis axis, double start, double stop, int points) {
  RunConfig cfg;
  cfg.sweep = AxisRange{axis, start, stop, points};
  return sweep_from_config(cfg);
}

}  // namespace

TEST_CASE("single point evaluation") {
  PointInput in;
  in.params = DeviceParams::fig2_caption();
  const auto r = evaluate_point(in);
  CHECK(r.ok());
  CHECK(r.physical);
  CHECK(r.log_neg == doctest::Approx(1.257337476818996).epsilon(1e-9));
  CHECK(r.f_cat == doctest::Approx(0.6087849191022746).epsilon(1e-9));
  CHECK(r.f_opt == doctest::Approx(optimal_fidelity(r.log_neg)));
  CHECK(r.stability_margin == doctest::Approx(0.0200017).epsilon(1e-4));
  CHECK(r.value(Observable::f_coherent) == r.f_coherent);

  SUBCASE("unstable point is flagged, not thrown") {
    auto u = in;
    u.params.power_c *= 1000.0;
    u.params.power_w *= 1000.0;
    const auto ru = evaluate_point(u);
    CHECK_FALSE(ru.stable);
    CHECK_FALSE(ru.ok());
    CHECK(ru.stability_margin < 0.0);
    CHECK(ru.error.empty());
  }
  SUBCASE("invalid parameters produce an error row") {
    auto u = in;
    u.params.mu = 2.0;
    const auto ru = evaluate_point(u);
    CHECK_FALSE(ru.ok());
    CHECK(ru.error.find("mu") != std::string::npos);
  }
}

TEST_CASE("axis grid and coordinates") {
  const auto spec = small_spec(SweepAxis::omega_w_center, 0.8, 1.2, 81);
  const auto xs = spec.axis_values();
  REQUIRE(xs.size() == 81);
  CHECK(xs.front() == 0.8);
  CHECK(xs.back() == 1.2);
  CHECK(xs[40] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spec.at(0.9).window.center_w_rel == 0.9);
  CHECK(small_spec(SweepAxis::omega_c_center, -1, 0, 2).at(-0.5).window.center_c_rel == -0.5);
  CHECK(small_spec(SweepAxis::epsilon, 1, 2, 2).at(42.0).window.epsilon == 42.0);
  CHECK(small_spec(SweepAxis::cat_alpha, 0, 2, 2).at(0.3).cat_alpha == 0.3);
  CHECK(small_spec(SweepAxis::temperature, 0, 2, 2).at(0.1).params.temperature == 0.1);
}

TEST_CASE("parallel and serial sweeps agree and are deterministic") {
  RunConfig cfg;
  cfg.sweep = AxisRange{SweepAxis::omega_w_center, 0.9, 1.1, 17};
  const auto spec = sweep_from_config(cfg);
  const auto serial = run_sweep(spec, 1);
  const auto parallel = run_sweep(spec, 4);
  REQUIRE(serial.size() == 17);
  REQUIRE(parallel.size() == 17);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].x == parallel[i].x);
    CHECK(serial[i].log_neg == parallel[i].log_neg);
    CHECK(serial[i].f_cat == parallel[i].f_cat);
    CHECK(serial[i].min_symplectic == parallel[i].min_symplectic);
  }
  std::ostringstream a, b, c;
  write_sweep_csv(a, spec, cfg, serial);
  write_sweep_csv(b, spec, cfg, parallel);
  write_sweep_csv(c, spec, cfg, run_sweep(spec, 0));
  CHECK(a.str() == b.str());
  CHECK(a.str() == c.str());
  CHECK(a.str().find("index,x_value,epsilon,stable,physical,E_N,F_cat,F_coherent,F_opt,stability_margin\n") !=
        std::string::npos);
  CHECK(a.str().find(params_fingerprint(cfg.params)) != std::string::npos);
  CHECK(data_lines(a.str()).size() == 17);
}

TEST_CASE("figure presets") {
  for (auto name : {"fig2", "fig3", "fig4", "sm1"}) CHECK(figure_preset(name).has_value());
  CHECK_FALSE(figure_preset("fig5").has_value());
  const auto f2 = *figure_preset("fig2");
  CHECK(f2.range.points == 81);
  CHECK(f2.range.start == 0.8);
  CHECK(f2.range.stop == 1.2);
  CHECK(f2.observable == Observable::log_neg);
  const auto sm1 = *figure_preset("sm1");
  CHECK(sm1.direction == Direction::reversed);
  CHECK(sm1.range.axis == SweepAxis::omega_c_center);
  CHECK(sm1.range.start == -1.2);
  CHECK(sm1.range.stop == -0.8);
  CHECK_THROWS_AS(emit_figure("nope", RunConfig{}, fs::temp_directory_path()), ValidationError);
}

TEST_CASE("emitted figure data") {
  const auto dir = scratch_dir("fig");
  RunConfig cfg;
  SUBCASE("fig2: four curves of 81 points") {
    const auto path = emit_figure("fig2", cfg, dir, 0);
    CHECK(path == dir / "fig2.csv");
    const auto text = slurp(path);
    CHECK(text.find("x_value,observable,epsilon,value,f_opt\n") != std::string::npos);
    CHECK(text.find("# constants=CODATA-2018") != std::string::npos);
    CHECK(text.find("# params_hash=" + params_fingerprint(cfg.params)) != std::string::npos);
    const auto rows = data_lines(text);
    CHECK(rows.size() == 4 * 81);
    for (const auto& r : rows) CHECK(split(r)[1] == "E_N");
    // byte-identical on a rerun
    const auto dir2 = scratch_dir("fig_again");
    CHECK(slurp(emit_figure("fig2", cfg, dir2, 1)) == text);
  }
  SUBCASE("fig3: F never exceeds F_opt") {
    const auto rows = data_lines(slurp(emit_figure("fig3", cfg, dir, 0)));
    CHECK(rows.size() == 4 * 81);
    for (const auto& r : rows) {
      const auto cells = split(r);
      REQUIRE(cells.size() == 5);
      CHECK(cells[1] == "F_cat");
      CHECK(std::stod(cells[3]) <= std::stod(cells[4]) + 1e-9);
    }
  }
}

TEST_CASE("cli exit codes and outputs") {
  CHECK(run_cli({"validate"}).code == 0);
  CHECK(run_cli({"validate", "--preset", "fig2-caption"}).code == 0);
  CHECK(run_cli({"--preset", "fig2-caption", "validate"}).out.find("valid = true") != std::string::npos);
  CHECK(run_cli({"figure", "nope"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"--tol", "-1", "entangle"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"--preset", "other", "derive"}).code == 2);

  const auto dir = scratch_dir("cli");
  SUBCASE("config diagnostics") {
    std::ofstream(dir / "bad.cfg") << "mass = 1e-11\nwat = 2\n";
    const auto r = run_cli({"--config", (dir / "bad.cfg").string(), "derive"});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
    std::ofstream(dir / "mu.cfg") << "mu = 1.5\n";
    const auto v = run_cli({"--config", (dir / "mu.cfg").string(), "validate"});
    CHECK(v.code == 2);
    CHECK(v.out.find("violation = mu") != std::string::npos);
    CHECK(run_cli({"--config", (dir / "mu.cfg").string(), "steady"}).code == 2);
  }
  SUBCASE("entangle writes the CM") {
    const auto r = run_cli({"--out", dir.string(), "entangle"});
    CHECK(r.code == 0);
    CHECK(r.out.find("E_N = 1.25733747") != std::string::npos);
    CHECK(fs::exists(dir / "output_cm.csv"));
  }
  SUBCASE("teleport") {
    const auto r = run_cli({"teleport"});
    CHECK(r.code == 0);
    CHECK(r.out.find("F_cat = 0.6087849191") != std::string::npos);
  }
  SUBCASE("steady") {
    const auto r = run_cli({"steady"});
    CHECK(r.code == 0);
    CHECK(r.out.find("stable = true") != std::string::npos);
  }
  SUBCASE("sweep to file and stdout") {
    std::ofstream(dir / "sweep.cfg") << "axis = cat_alpha\nstart = 0\nstop = 2\npoints = 5\noutputs = F_cat\n";
    const auto a = run_cli({"--config", (dir / "sweep.cfg").string(), "--jobs", "2", "--out", dir.string(), "sweep"});
    CHECK(a.code == 0);
    const auto b = run_cli({"--config", (dir / "sweep.cfg").string(), "sweep"});
    CHECK(b.code == 0);
    CHECK(slurp(dir / "sweep.csv") == b.out);
    CHECK(data_lines(b.out).size() == 5);
  }
  SUBCASE("all points unstable is a numerical failure") {
    std::ofstream(dir / "hot.cfg") << "power_c = 3.4\npower_w = 42\naxis = epsilon\nstart = 50\nstop = 100\npoints = 3\n";
    const auto r = run_cli({"--config", (dir / "hot.cfg").string(), "sweep"});
    CHECK(r.code == 1);
    CHECK(r.err.find("no stable point") != std::string::npos);
  }
  SUBCASE("unstable device for entangle is a numerical failure") {
    std::ofstream(dir / "hot.cfg") << "power_c = 3.4\npower_w = 42\n";
    const auto r = run_cli({"--config", (dir / "hot.cfg").string(), "entangle"});
    CHECK(r.code == 1);
    CHECK(r.err.find("no stationary state") != std::string::npos);
  }
  SUBCASE("figure through the cli") {
    const auto r = run_cli({"--out", dir.string(), "--jobs", "0", "figure", "fig4"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "fig4.csv"));
  }
}
