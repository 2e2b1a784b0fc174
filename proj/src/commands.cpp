#include "kvlab/commands.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>

#include "kvlab/equilibrium.hpp"
#include "kvlab/error.hpp"
#include "kvlab/format.hpp"
#include "kvlab/inequalities.hpp"
#include "kvlab/transport.hpp"

namespace kvlab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json constants_json(const RateConstants& c) {
  json j;
  j["c_m"] = c.c_m;
  j["m"] = c.m;
  j["lambda"] = c.lambda;
  j["eps_star"] = c.eps_star;
  j["c_star"] = c.c_star;
  j["L"] = c.L;
  j["t_star"] = number(c.t_star);
  j["t_star_arguments"] = {c.t_star_args[0], c.t_star_args[1], c.t_star_args[2]};
  j["t0"] = c.t0 ? json(*c.t0) : json(nullptr);
  j["t0_threshold"] = t0_threshold(c);
  j["j0"] = c.j0;
  j["h0"] = c.h0;
  j["asymptotic_rate"] = asymptotic_rate_item3(0.0);
  return j;
}

void write_manifest(const RunConfig& config, const fs::path& dir) {
  json m;
  m["tool"] = "kvlab";
  m["version"] = kVersion;
#ifdef __VERSION__
  m["compiler"] = __VERSION__;
#endif
  json cfg;
  for (const auto& [k, v] : config_entries(config)) cfg[k] = v;
  m["config"] = cfg;
  json consts;
  consts["c_m"] = normalizer_cm();
  consts["m"] = equilibrium_momentum_m();
  consts["lambda"] = 1.0 + std::abs(std::log(normalizer_cm()));
  consts["c_star"] = lsi_constant(1.0 + std::abs(std::log(normalizer_cm())), config.eps_star);
  m["constants"] = consts;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

json report_json(const std::string& suite, const InequalityReport& r) {
  json j;
  j["suite"] = suite;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["holds"] = r.holds;
  json ctx;
  for (const auto& [k, v] : r.context) ctx[k] = number(v);
  j["context"] = ctx;
  return j;
}

struct RateAnalysis {
  RateConstants constants;
  std::vector<Envelope> envelopes;
  std::string t0_status = "ok";
  bool violation = false;
  json checks = json::object();
};

RateAnalysis analyze_rates(const Trajectory& traj, const RunConfig& config) {
  RateAnalysis a;
  const auto& r0 = traj.records.front();
  a.constants = compute_constants(r0.H, r0.j.magnitude(), config.eps_star);
  try {
    a.constants = with_t0(a.constants, detect_t0(traj, a.constants));
  } catch (const TrajectoryTooShort& e) {
    a.t0_status = e.what();
    return a;
  } catch (const TheoryViolation& e) {
    a.t0_status = e.what();
    a.violation = true;
    return a;
  }
  a.envelopes = decay_envelopes(traj, a.constants, config.tail_constant);

  long h_violations = 0;
  long b_violations = 0;
  long j_violations = 0;
  const double t0 = *a.constants.t0;
  const double b_inf = 1.0 / a.constants.c_star;
  for (int k = 0; k < traj.size(); ++k) {
    const auto& r = traj.records[k];
    const double hb = a.envelopes[k].h_bound;
    if (r.H > hb + 1e-12 + 1e-8 * hb) ++h_violations;
    if (r.t >= t0 && std::abs(b_function(r.t, a.constants) - b_inf) > 1e-14) ++b_violations;
    if (r.j.magnitude() < a.constants.j0 * std::exp(-r.t) - 1e-6) ++j_violations;
  }
  const bool t0_ok = t0 <= a.constants.t_star;
  a.checks["h_below_envelope_violations"] = h_violations;
  a.checks["b_constant_after_t0_violations"] = b_violations;
  a.checks["momentum_lower_bound_violations"] = j_violations;
  a.checks["t0_within_t_star"] = t0_ok;
  if (traj.size() >= 3) {
    const MomentumStabilization ms = momentum_stabilization(traj);
    a.checks["omega_drift"] = ms.omega_drift;
    a.checks["fitted_momentum_constant"] = ms.fitted_c;
  }
  a.violation = h_violations > 0 || b_violations > 0 || j_violations > 0 || !t0_ok;
  return a;
}

Trajectory simulate(const RunConfig& config) {
  GridPtr grid = build_grid(config.solver.n_cells);
  return run(build_initial_condition(config.ic, grid), config.solver);
}

void write_trajectory(const RunConfig& config, const fs::path& dir, const Trajectory& traj,
                      const std::vector<Envelope>& env) {
  if (config.formats != Formats::json) emit_trajectory_csv(traj, env, dir / "trajectory.csv");
  if (config.formats != Formats::csv) {
    json rows = json::array();
    for (int k = 0; k < traj.size(); ++k) {
      const auto& r = traj.records[k];
      json row;
      row["t"] = r.t;
      row["H"] = r.H;
      row["I"] = r.I;
      row["E"] = r.E;
      row["J_norm"] = r.j.magnitude();
      row["omega_x"] = r.omega.x();
      row["omega_y"] = r.omega.y();
      row["l1_to_eq"] = r.l1_to_equilibrium;
      row["sup_ratio"] = r.sup_ratio;
      row["H_bound"] = env.empty() ? json(nullptr) : number(env[k].h_bound);
      row["L1_bound"] = env.empty() ? json(nullptr) : number(env[k].l1_bound);
      row["low_density"] = r.low_density;
      rows.push_back(row);
    }
    write_text(dir / "trajectory.json", rows.dump(2) + "\n");
  }
}

int cmd_simulate(const RunConfig& config, const fs::path& dir) {
  const Trajectory traj = simulate(config);
  const RateAnalysis a = analyze_rates(traj, config);
  write_trajectory(config, dir, traj, a.envelopes);
  return kExitOk;
}

int cmd_rates(const RunConfig& config, const fs::path& dir) {
  const Trajectory traj = simulate(config);
  const RateAnalysis a = analyze_rates(traj, config);
  write_trajectory(config, dir, traj, a.envelopes);
  json out = constants_json(a.constants);
  out["t0_status"] = a.t0_status;
  out["tail_constant"] = config.tail_constant;
  out["checks"] = a.checks;
  out["theory_violation"] = a.violation;
  write_text(dir / "constants.json", out.dump(2) + "\n");
  return a.violation ? kExitTheoryViolation : kExitOk;
}

bool suite_selected(const RunConfig& config, const std::string& name) {
  const auto& s = config.verify.suites;
  return s.empty() || std::find(s.begin(), s.end(), name) != s.end();
}

int cmd_verify(const RunConfig& config, const fs::path& dir) {
  GridPtr grid = build_grid(config.solver.n_cells);
  const std::uint64_t seed = config.verify.seed;
  std::ostringstream lines;
  bool all_hold = true;
  auto emit = [&](const std::string& suite, const InequalityReport& r) {
    all_hold = all_hold && r.holds;
    lines << report_json(suite, r).dump() << '\n';
  };

  if (suite_selected(config, "lsi")) {
    for (int s = 0; s < config.verify.lsi_samples; ++s) {
      const LsiSample sample = random_lsi_sample(grid, seed + s, config.eps_star, 3.1);
      InequalityReport r = verify_lsi(sample.rho, sample.psi, config.eps_star, sample.lambda);
      r.context["seed"] = static_cast<double>(seed + s);
      emit("lsi", r);
    }
  }
  if (suite_selected(config, "poincare")) {
    const double cm = normalizer_cm();
    const double lambda = 1.0 + std::abs(std::log(cm));
    const DensityField m = fisher_von_mises(grid, Direction::from_angle(0.0));
    std::vector<double> psi(grid->size());
    for (int i = 0; i < grid->size(); ++i) psi[i] = -grid->cos_nodes()[i] - std::log(cm);
    for (int s = 0; s < config.verify.poincare_samples; ++s) {
      std::vector<double> f = random_trig_polynomial(*grid, seed + s, 1 + s % 6);
      std::vector<double> fm(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) fm[i] = f[i] * m[static_cast<int>(i)];
      const double mean = quadrature(*grid, fm);
      for (double& x : f) x -= mean;
      InequalityReport r = verify_poincare(*grid, f, psi, lambda);
      r.context["seed"] = static_cast<double>(seed + s);
      emit("poincare", r);
    }
  }
  if (suite_selected(config, "dissipation_growth") || suite_selected(config, "dissipation_rate")) {
    const Trajectory traj = simulate(config);
    if (suite_selected(config, "dissipation_growth")) {
      for (int k = 0; k < traj.size(); ++k)
        emit("dissipation_growth", dissipation_growth_check(traj, 0, k));
      const PairSweepSummary sweep = dissipation_growth_sweep(traj);
      emit("dissipation_growth",
           make_report("dissipation_growth_all_pairs", static_cast<double>(sweep.violations), 0.0,
                       {{"pairs", static_cast<double>(sweep.pairs)},
                        {"worst_relative_slack", sweep.worst_relative_slack}}));
    }
    if (suite_selected(config, "dissipation_rate")) {
      for (int k = 1; k + 1 < traj.size(); ++k) {
        const double residual = didt_identity_residual(traj, k);
        emit("dissipation_rate",
             make_report("didt_identity_residual", residual, 1e-2, {{"t", traj.records[k].t}}));
        emit("dissipation_rate", dissipation_rate_check(traj, k));
      }
    }
  }
  if (suite_selected(config, "laplog")) {
    for (int s = 0; s < config.verify.laplog_samples; ++s) {
      const auto [rho, psi] = random_smooth_pair(grid, seed + s);
      const double residual = laplog_identity_residual(*grid, rho.values(), psi);
      emit("laplog", make_report("laplog_identity_residual", residual, 1e-8,
                                 {{"seed", static_cast<double>(seed + s)},
                                  {"n_cells", static_cast<double>(grid->size())}}));
    }
  }
  write_text(dir / "reports.jsonl", lines.str());
  return all_hold ? kExitOk : kExitTheoryViolation;
}

int cmd_stability(const RunConfig& config, const fs::path& dir) {
  GridPtr grid = build_grid(config.solver.n_cells);
  const StabilityReport rep =
      stability_experiment(build_initial_condition(config.ic, grid),
                           build_initial_condition(config.ic_bar, grid), config.solver);
  json out;
  out["delta"] = number(rep.delta);
  out["j0"] = rep.j0;
  out["h0"] = rep.h0;
  out["h0_bar"] = rep.h0_bar;
  out["w2_initial"] = rep.w2_initial;
  out["exponent"] = 1.0 + 2.0 / rep.j0;
  out["violations"] = rep.violations;
  json recs = json::array();
  for (const auto& r : rep.records) {
    recs.push_back({{"t", r.t}, {"w2", r.w2}, {"bound", r.bound}, {"holds", r.holds}});
  }
  out["records"] = recs;
  write_text(dir / "stability_report.json", out.dump(2) + "\n");
  return rep.violations == 0 ? kExitOk : kExitTheoryViolation;
}

int cmd_uniqueness(const RunConfig& config, const fs::path& dir) {
  GridPtr grid = build_grid(config.solver.n_cells);
  const UniquenessReport rep = uniqueness_experiment(build_initial_condition(config.ic, grid),
                                                     config.solver, config.t_probe);
  json out;
  out["t_probe"] = config.t_probe;
  out["perturbation_l2"] = rep.perturbation;
  out["twins_bitwise_identical"] = rep.twins_bitwise_identical;
  out["fitted_rate"] = number(rep.fitted_rate);
  out["fitted_c"] = number(rep.fitted_c);
  out["gronwall_holds"] = rep.gronwall_holds;
  json recs = json::array();
  for (const auto& r : rep.records) {
    recs.push_back({{"t", r.t}, {"diff_l2", r.diff_l2}, {"grad_diff_l2", r.grad_diff_l2}});
  }
  out["records"] = recs;
  write_text(dir / "uniqueness_report.json", out.dump(2) + "\n");
  return rep.twins_bitwise_identical && rep.gronwall_holds ? kExitOk : kExitTheoryViolation;
}

int run_in(const RunConfig& config, const fs::path& dir);

int cmd_sweep(const RunConfig& config, const fs::path& dir) {
  std::vector<std::future<int>> jobs;
  for (std::size_t p = 0; p < config.sweep.values.size(); ++p) {
    RunConfig point = config;
    point.command = Command::rates;
    set_config_value(point, config.sweep.param, config.sweep.values[p]);
    char name[32];
    std::snprintf(name, sizeof name, "point_%03zu", p);
    const fs::path sub = dir / name;
    point.output_dir = sub.string();
    jobs.push_back(std::async(std::launch::async, [point, sub] { return run_in(point, sub); }));
  }
  int status = kExitOk;
  for (auto& j : jobs) status = std::max(status, j.get());
  return status;
}

int run_in(const RunConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  write_manifest(config, dir);
  switch (config.command) {
    case Command::simulate:
      return cmd_simulate(config, dir);
    case Command::rates:
      return cmd_rates(config, dir);
    case Command::verify:
      return cmd_verify(config, dir);
    case Command::stability:
      return cmd_stability(config, dir);
    case Command::uniqueness:
      return cmd_uniqueness(config, dir);
    case Command::sweep:
      return cmd_sweep(config, dir);
  }
  return kExitError;
}

}  // namespace

void emit_trajectory_csv(const Trajectory& trajectory, const std::vector<Envelope>& envelopes,
                         const fs::path& path) {
  if (!envelopes.empty() && static_cast<int>(envelopes.size()) != trajectory.size()) {
    throw InvalidArgument("emit_trajectory_csv: envelope count does not match records");
  }
  std::ostringstream out;
  out << kTrajectoryHeader << '\n';
  for (int k = 0; k < trajectory.size(); ++k) {
    const auto& r = trajectory.records[k];
    const double hb = envelopes.empty() ? kNaN : envelopes[k].h_bound;
    const double lb = envelopes.empty() ? kNaN : envelopes[k].l1_bound;
    const double cols[] = {
        r.t,         r.H, r.I, r.E, r.j.magnitude(), r.omega.x(), r.omega.y(), r.l1_to_equilibrium,
        r.sup_ratio, hb,  lb};
    for (std::size_t c = 0; c < std::size(cols); ++c) {
      if (c) out << ',';
      out << format_double(cols[c]);
    }
    out << '\n';
  }
  write_text(path, out.str());
}

int run_command(const RunConfig& config) {
  config.validate();
  return run_in(config, fs::path(config.output_dir));
}

}  // namespace kvlab
