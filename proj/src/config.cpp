#include "kvlab/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "kvlab/equilibrium.hpp"
#include "kvlab/error.hpp"
#include "kvlab/format.hpp"

namespace kvlab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
    throw InvalidArgument(key + ": expected a finite number, got '" + v + "'");
  }
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument(key + ": expected an integer, got '" + v + "'");
  }
  return x;
}

std::uint64_t parse_seed(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument(key + ": expected a nonnegative integer, got '" + v + "'");
  }
  return x;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool set_ic_value(InitialCondition& ic, const std::string& key, const std::string& field,
                  const std::string& v) {
  if (field == "kind") {
    ic.kind = v;
  } else if (field == "eps") {
    ic.eps = parse_double(key, v);
  } else if (field == "mode") {
    ic.mode = static_cast<int>(parse_int(key, v));
  } else if (field == "seed") {
    ic.seed = parse_seed(key, v);
  } else if (field == "angle") {
    ic.angle = parse_double(key, v);
  } else if (field == "kappa") {
    ic.kappa = parse_double(key, v);
  } else if (field == "amplitude") {
    ic.amplitude = parse_double(key, v);
  } else {
    return false;
  }
  return true;
}

void ic_entries(std::vector<std::pair<std::string, std::string>>& out, const std::string& prefix,
                const InitialCondition& ic) {
  out.emplace_back(prefix + "kind", ic.kind);
  out.emplace_back(prefix + "eps", format_double(ic.eps));
  out.emplace_back(prefix + "mode", std::to_string(ic.mode));
  out.emplace_back(prefix + "seed", std::to_string(ic.seed));
  out.emplace_back(prefix + "angle", format_double(ic.angle));
  out.emplace_back(prefix + "kappa", format_double(ic.kappa));
  out.emplace_back(prefix + "amplitude", format_double(ic.amplitude));
}

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::simulate:
      return "simulate";
    case Command::rates:
      return "rates";
    case Command::verify:
      return "verify";
    case Command::stability:
      return "stability";
    case Command::uniqueness:
      return "uniqueness";
    case Command::sweep:
      return "sweep";
  }
  return "?";
}

void InitialCondition::validate(const std::string& prefix) const {
  static const char* kinds[] = {"uniform", "von_mises", "equilibrium", "perturbed", "cosine"};
  bool known = false;
  for (const char* k : kinds) known = known || kind == k;
  if (!known) {
    throw InvalidArgument(prefix +
                          "kind: expected uniform, von_mises, equilibrium, perturbed or cosine");
  }
  if (!(std::abs(eps) < 1.0)) throw InvalidArgument(prefix + "eps: |eps| must be < 1");
  if (mode < 1) throw InvalidArgument(prefix + "mode: must be >= 1");
  if (!(kappa >= 0.0)) throw InvalidArgument(prefix + "kappa: must be >= 0");
  if (!(std::abs(amplitude) < 1.0)) throw InvalidArgument(prefix + "amplitude: must be < 1");
}

DensityField build_initial_condition(const InitialCondition& ic, GridPtr grid) {
  if (ic.kind == "uniform") return make_uniform(grid);
  if (ic.kind == "von_mises") return make_von_mises(grid, ic.kappa, ic.angle);
  if (ic.kind == "equilibrium") return fisher_von_mises(grid, Direction::from_angle(ic.angle));
  if (ic.kind == "perturbed") {
    return make_perturbed_equilibrium(grid, Direction::from_angle(ic.angle), ic.eps, ic.mode,
                                      ic.seed);
  }
  if (ic.kind == "cosine") {
    std::vector<double> v(grid->size());
    for (int i = 0; i < grid->size(); ++i) {
      v[i] = 1.0 + ic.amplitude * std::cos(grid->node(i) - ic.angle);
    }
    return DensityField::normalized(grid, std::move(v));
  }
  throw InvalidArgument("unknown initial condition kind '" + ic.kind + "'");
}

void RunConfig::validate() const {
  solver.validate();
  if (!(eps_star > 0.0 && eps_star <= 0.1)) {
    throw InvalidArgument("eps_star: must satisfy 0 < eps_star <= 1/10");
  }
  if (!(tail_constant >= 0.0)) throw InvalidArgument("tail_constant: must be >= 0");
  if (!(t_probe > 0.0)) throw InvalidArgument("t_probe: must be > 0");
  if (output_dir.empty()) throw InvalidArgument("output_dir: must not be empty");
  ic.validate("ic.");
  if (has_ic_bar) ic_bar.validate("ic_bar.");
  if (command == Command::stability && !has_ic_bar) {
    throw InvalidArgument("ic_bar: stability needs a second initial condition");
  }
  if (verify.lsi_samples < 0 || verify.poincare_samples < 0 || verify.laplog_samples < 0) {
    throw InvalidArgument("verify: sample counts must be >= 0");
  }
  static const char* suites[] = {"lsi", "poincare", "dissipation_growth", "dissipation_rate",
                                 "laplog"};
  for (const auto& s : verify.suites) {
    bool ok = false;
    for (const char* k : suites) ok = ok || s == k;
    if (!ok) {
      throw InvalidArgument(
          "suite '" + s +
          "': expected lsi, poincare, dissipation_growth, dissipation_rate or laplog");
    }
  }
  if (command == Command::sweep) {
    if (sweep.param.empty() || sweep.values.empty()) {
      throw InvalidArgument("sweep: param and values are required");
    }
    for (const auto& v : sweep.values) {
      RunConfig probe = *this;
      set_config_value(probe, sweep.param, v);
      probe.command = Command::simulate;
      probe.validate();
    }
  }
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "command") {
    static const Command all[] = {Command::simulate,  Command::rates,      Command::verify,
                                  Command::stability, Command::uniqueness, Command::sweep};
    for (Command cmd : all) {
      if (v == to_string(cmd)) {
        c.command = cmd;
        return;
      }
    }
    throw InvalidArgument("command: unknown command '" + v + "'");
  }
  if (key == "dt") {
    c.solver.dt = parse_double(key, v);
  } else if (key == "t_end") {
    c.solver.t_end = parse_double(key, v);
  } else if (key == "n_cells") {
    c.solver.n_cells = static_cast<int>(parse_int(key, v));
  } else if (key == "momentum_tol") {
    c.solver.momentum_tol = parse_double(key, v);
  } else if (key == "flux_scheme") {
    if (v == "exponential_fitting") {
      c.solver.flux_scheme = FluxScheme::exponential_fitting;
    } else if (v == "central") {
      c.solver.flux_scheme = FluxScheme::central;
    } else if (v == "fourth_order") {
      c.solver.flux_scheme = FluxScheme::fourth_order;
    } else {
      throw InvalidArgument("flux_scheme: expected exponential_fitting, central or fourth_order");
    }
  } else if (key == "stepping") {
    if (v == "semi_implicit") {
      c.solver.stepping = Stepping::semi_implicit;
    } else if (v == "explicit") {
      c.solver.stepping = Stepping::explicit_euler;
    } else {
      throw InvalidArgument("stepping: expected semi_implicit or explicit");
    }
  } else if (key == "theta") {
    c.solver.theta = parse_double(key, v);
  } else if (key == "record_every") {
    c.solver.record_every = static_cast<int>(parse_int(key, v));
  } else if (key == "eps_star") {
    c.eps_star = parse_double(key, v);
  } else if (key == "tail_constant") {
    c.tail_constant = parse_double(key, v);
  } else if (key == "t_probe") {
    c.t_probe = parse_double(key, v);
  } else if (key == "output_dir") {
    c.output_dir = v;
  } else if (key == "formats") {
    if (v == "csv") {
      c.formats = Formats::csv;
    } else if (v == "json") {
      c.formats = Formats::json;
    } else if (v == "both") {
      c.formats = Formats::both;
    } else {
      throw InvalidArgument("formats: expected csv, json or both");
    }
  } else if (key.rfind("ic.", 0) == 0 && set_ic_value(c.ic, key, key.substr(3), v)) {
  } else if (key.rfind("ic_bar.", 0) == 0 && set_ic_value(c.ic_bar, key, key.substr(7), v)) {
    c.has_ic_bar = true;
  } else if (key == "verify.suites") {
    c.verify.suites = split_list(v);
  } else if (key == "verify.lsi_samples") {
    c.verify.lsi_samples = static_cast<int>(parse_int(key, v));
  } else if (key == "verify.poincare_samples") {
    c.verify.poincare_samples = static_cast<int>(parse_int(key, v));
  } else if (key == "verify.laplog_samples") {
    c.verify.laplog_samples = static_cast<int>(parse_int(key, v));
  } else if (key == "verify.seed") {
    c.verify.seed = parse_seed(key, v);
  } else if (key == "sweep.param") {
    c.sweep.param = v;
  } else if (key == "sweep.values") {
    c.sweep.values = split_list(v);
  } else {
    throw InvalidArgument("unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::string prefix;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "malformed section header");
      const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (name.empty()) throw ParseError(line_no, "empty section name");
      prefix = (name == "solver" || name == "run") ? "" : name + ".";
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = prefix + trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError(line_no, "expected key = value");
    try {
      set_config_value(c, key, value);
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  c.validate();
  return c;
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("command", to_string(c.command));
  out.emplace_back("n_cells", std::to_string(c.solver.n_cells));
  out.emplace_back("dt", format_double(c.solver.dt));
  out.emplace_back("t_end", format_double(c.solver.t_end));
  out.emplace_back("momentum_tol", format_double(c.solver.momentum_tol));
  out.emplace_back("flux_scheme", to_string(c.solver.flux_scheme));
  out.emplace_back("stepping", to_string(c.solver.stepping));
  out.emplace_back("theta", format_double(c.solver.theta));
  out.emplace_back("record_every", std::to_string(c.solver.record_every));
  out.emplace_back("eps_star", format_double(c.eps_star));
  out.emplace_back("tail_constant", format_double(c.tail_constant));
  out.emplace_back("t_probe", format_double(c.t_probe));
  out.emplace_back("output_dir", c.output_dir);
  out.emplace_back("formats", c.formats == Formats::csv    ? "csv"
                              : c.formats == Formats::json ? "json"
                                                           : "both");
  ic_entries(out, "ic.", c.ic);
  if (c.has_ic_bar) ic_entries(out, "ic_bar.", c.ic_bar);
  if (c.command == Command::verify) {
    std::string suites;
    for (const auto& s : c.verify.suites) suites += (suites.empty() ? "" : ",") + s;
    out.emplace_back("verify.suites", suites);
    out.emplace_back("verify.lsi_samples", std::to_string(c.verify.lsi_samples));
    out.emplace_back("verify.poincare_samples", std::to_string(c.verify.poincare_samples));
    out.emplace_back("verify.laplog_samples", std::to_string(c.verify.laplog_samples));
    out.emplace_back("verify.seed", std::to_string(c.verify.seed));
  }
  if (c.command == Command::sweep) {
    std::string values;
    for (const auto& s : c.sweep.values) values += (values.empty() ? "" : ",") + s;
    out.emplace_back("sweep.param", c.sweep.param);
    out.emplace_back("sweep.values", values);
  }
  return out;
}

}  // namespace kvlab
