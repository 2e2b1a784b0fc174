#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kvlab/commands.hpp"
#include "kvlab/config.hpp"
#include "kvlab/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Kolmogorov-Vicsek Fokker-Planck laboratory on the circle"};
  std::string config_path;
  std::string output_dir;
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--output", output_dir, "output directory (overrides output_dir)");
  app.add_option("--suite", suites,
                 "verify suite: lsi, poincare, dissipation_growth, dissipation_rate, laplog");
  auto* seed_opt = app.add_option("--seed", seed, "seed for initial data and sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kvlab::kExitOk : kvlab::kExitError;
  }

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read " << config_path << "\n";
      return kvlab::kExitError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    kvlab::RunConfig config = kvlab::parse_config(buf.str());
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (!suites.empty()) config.verify.suites = suites;
    if (*seed_opt) {
      config.ic.seed = seed;
      config.verify.seed = seed;
    }
    const int status = kvlab::run_command(config);
    if (status == kvlab::kExitTheoryViolation) {
      std::cerr << "theory violation: see reports in " << config.output_dir << "\n";
    }
    return status;
  } catch (const kvlab::TheoryViolation& e) {
    std::cerr << "theory violation: " << e.what() << "\n";
    return kvlab::kExitTheoryViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kvlab::kExitError;
  }
}
