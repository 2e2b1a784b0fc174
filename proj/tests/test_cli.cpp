#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "approx.hpp"
#include "kvlab/commands.hpp"
#include "kvlab/config.hpp"
#include "kvlab/equilibrium.hpp"
#include "kvlab/error.hpp"

using namespace kvlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kvlab_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::vector<double>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell == "nan" ? NAN : std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

constexpr const char* kMinimal =
    "command=simulate\n"
    "n_cells=256\n"
    "dt=1e-4\n"
    "t_end=5\n"
    "ic.kind=perturbed\n"
    "ic.eps=0.1\n"
    "ic.mode=2\n"
    "ic.seed=1\n";

}  // namespace

TEST_CASE("parse minimal config") {
  const auto c = parse_config(kMinimal);
  CHECK(c.command == Command::simulate);
  CHECK(c.solver.n_cells == 256);
  CHECK(c.solver.dt == 1e-4);
  CHECK(c.solver.t_end == 5.0);
  CHECK(c.ic.kind == "perturbed");
  CHECK(c.ic.eps == 0.1);
  CHECK(c.ic.mode == 2);
  CHECK(c.ic.seed == 1);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("sections, comments and whitespace") {
  const auto c = parse_config(
      "# header comment\n"
      "command = rates\n"
      "\n"
      "[solver]\n"
      "  flux_scheme = fourth_order   \n"
      "stepping = explicit\n"
      "[ic]\n"
      "kind = von_mises\n"
      "kappa = 2.5\n"
      "[verify]\n"
      "suites = lsi, laplog\n");
  CHECK(c.command == Command::rates);
  CHECK(c.solver.flux_scheme == FluxScheme::fourth_order);
  CHECK(c.solver.stepping == Stepping::explicit_euler);
  CHECK(c.ic.kind == "von_mises");
  CHECK(c.ic.kappa == 2.5);
  REQUIRE(c.verify.suites.size() == 2);
  CHECK(c.verify.suites[1] == "laplog");
}

TEST_CASE("unknown key cites its line") {
  try {
    parse_config("command=simulate\n# comment\ndtt=1e-4\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("dtt") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("n_cells=abc\n"), ParseError);
  CHECK_THROWS_AS(parse_config("just text\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[broken\n"), ParseError);
  CHECK_THROWS_AS(parse_config("flux_scheme=upwind\n"), ParseError);
}

TEST_CASE("validation names the field") {
  try {
    parse_config("eps_star = 0.2\n");
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("eps_star") != std::string::npos);
    CHECK(msg.find("1/10") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("dt = -1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("n_cells = 15\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("command = stability\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("ic.eps = 1.5\n"), InvalidArgument);
}

TEST_CASE("config entries round-trip") {
  const auto c = parse_config(kMinimal);
  RunConfig d;
  for (const auto& [k, v] : config_entries(c)) set_config_value(d, k, v);
  CHECK(config_entries(d) == config_entries(c));
}

TEST_CASE("initial condition builders") {
  const auto g = build_grid(64);
  InitialCondition ic;
  ic.kind = "cosine";
  ic.amplitude = 0.3;
  const auto rho = build_initial_condition(ic, g);
  CHECK(std::abs(rho.mass() - 1.0) < 1e-14);
  ic.kind = "equilibrium";
  ic.angle = 1.0;
  CHECK(std::abs(mean_direction(build_initial_condition(ic, g)).angle() - 1.0) < 1e-12);
  ic.kind = "spiral";
  CHECK_THROWS_AS(build_initial_condition(ic, g), InvalidArgument);
}

TEST_CASE("empty trajectory writes only the header") {
  const fs::path dir = scratch("empty");
  fs::create_directories(dir);
  emit_trajectory_csv(Trajectory{}, {}, dir / "t.csv");
  CHECK(slurp(dir / "t.csv") == std::string(kTrajectoryHeader) + "\n");
  fs::remove_all(dir);
}

TEST_CASE("simulate on a stationary state") {
  const fs::path dir = scratch("stationary");
  auto c = parse_config(
      "command=simulate\nn_cells=128\ndt=1e-3\nt_end=0.5\nrecord_every=10\nic.kind=equilibrium\n");
  c.output_dir = dir.string();
  CHECK(run_command(c) == kExitOk);
  CHECK(fs::exists(dir / "manifest.json"));
  const auto rows = csv_rows(dir / "trajectory.csv");
  REQUIRE(rows.size() == 51);
  for (const auto& r : rows) {
    REQUIRE(r.size() == 11);
    CHECK(r[7] <= 1e-10);
    CHECK(r[1] <= 1e-12);
  }
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["config"]["command"] == "simulate");
  CHECK(manifest.contains("constants"));
  fs::remove_all(dir);
}

TEST_CASE("identical runs produce identical bytes") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  auto c = parse_config(
      "command=simulate\nn_cells=128\ndt=1e-3\nt_end=0.3\nic.kind=perturbed\nic.seed=3\n");
  c.formats = Formats::both;
  c.output_dir = a.string();
  CHECK(run_command(c) == kExitOk);
  c.output_dir = b.string();
  CHECK(run_command(c) == kExitOk);
  CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
  CHECK(slurp(a / "trajectory.json") == slurp(b / "trajectory.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("verify laplog suite") {
  const fs::path dir = scratch("laplog");
  auto c = parse_config("command=verify\nn_cells=256\nverify.suites=laplog\n");
  c.output_dir = dir.string();
  CHECK(run_command(c) == kExitOk);
  std::ifstream in(dir / "reports.jsonl");
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["suite"] == "laplog");
    CHECK(j["lhs"].get<double>() <= 1e-8);
    CHECK(j["holds"].get<bool>());
    ++count;
  }
  CHECK(count == 100);
  fs::remove_all(dir);
}

TEST_CASE("rates writes the constants") {
  const fs::path dir = scratch("rates");
  auto c = parse_config(
      "command=rates\nn_cells=128\ndt=1e-3\nt_end=2\nrecord_every=10\neps_star=0.1\n"
      "ic.kind=perturbed\nic.eps=0.05\n");
  c.output_dir = dir.string();
  CHECK(run_command(c) == kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "constants.json"));
  CHECK(j["c_star"].get<double>() == rel(1.05e4).epsilon(0.01));
  CHECK_FALSE(j["t0"].is_null());
  CHECK_FALSE(j["theory_violation"].get<bool>());
  const auto rows = csv_rows(dir / "trajectory.csv");
  for (const auto& r : rows) {
    CHECK(std::isfinite(r[9]));
    CHECK(r[1] <= r[9]);
  }
  fs::remove_all(dir);
}

TEST_CASE("sweep writes one directory per point") {
  const fs::path dir = scratch("sweep");
  auto c = parse_config(
      "command=sweep\nn_cells=64\ndt=1e-3\nt_end=0.2\nic.kind=perturbed\n"
      "sweep.param=ic.eps\nsweep.values=0.02,0.05\n");
  c.output_dir = dir.string();
  const int status = run_command(c);
  CHECK((status == kExitOk || status == kExitTheoryViolation));
  CHECK(fs::exists(dir / "point_000" / "constants.json"));
  CHECK(fs::exists(dir / "point_001" / "constants.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  fs::remove_all(dir);
}

TEST_CASE("stability and uniqueness reports") {
  const fs::path dir = scratch("stab");
  auto c = parse_config(
      "command=stability\nn_cells=128\ndt=1e-3\nt_end=0.5\n"
      "ic.kind=perturbed\nic.eps=0.05\nic.seed=1\n"
      "ic_bar.kind=perturbed\nic_bar.eps=0.04\nic_bar.seed=1\n");
  c.output_dir = dir.string();
  CHECK(run_command(c) == kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "stability_report.json"));
  CHECK(j["violations"] == 0);

  c.command = Command::uniqueness;
  c.t_probe = 0.2;
  CHECK(run_command(c) == kExitOk);
  const auto u = nlohmann::json::parse(slurp(dir / "uniqueness_report.json"));
  CHECK(u["twins_bitwise_identical"].get<bool>());
  fs::remove_all(dir);
}
