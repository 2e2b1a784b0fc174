#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kvlab/fields.hpp"
#include "kvlab/solver.hpp"

namespace kvlab {

enum class Command { simulate, rates, verify, stability, uniqueness, sweep };
enum class Formats { csv, json, both };

struct InitialCondition {
  std::string kind = "perturbed";  // uniform | von_mises | equilibrium | perturbed | cosine
  double eps = 0.1;
  int mode = 2;
  std::uint64_t seed = 0;
  double angle = 0.0;
  double kappa = 1.0;
  double amplitude = 0.3;  // cosine: (1 + amplitude cos(theta - angle)) / 2pi

  void validate(const std::string& prefix) const;
};

DensityField build_initial_condition(const InitialCondition& ic, GridPtr grid);

struct VerifyOptions {
  std::vector<std::string> suites;  // empty: all
  int lsi_samples = 500;
  int poincare_samples = 200;
  int laplog_samples = 100;
  std::uint64_t seed = 1;
};

struct SweepOptions {
  std::string param;
  std::vector<std::string> values;
};

struct RunConfig {
  Command command = Command::simulate;
  SolverConfig solver;
  InitialCondition ic;
  InitialCondition ic_bar;  // second datum of the stability twin run
  bool has_ic_bar = false;
  double eps_star = 0.1;
  double tail_constant = 1.0;
  double t_probe = 1.0;
  std::string output_dir = "out";
  Formats formats = Formats::csv;
  VerifyOptions verify;
  SweepOptions sweep;

  void validate() const;
};

/// key=value lines, '#' comments, [section] headers that prefix keys with
/// "section." ([solver] and [run] add no prefix). Unknown keys and malformed
/// values raise ParseError with the line number; validation errors name the field.
RunConfig parse_config(std::string_view text);

/// Applies one key=value assignment; used by the parser and by sweeps.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Canonical key=value listing of the effective configuration.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

const char* to_string(Command command);

}  // namespace kvlab
