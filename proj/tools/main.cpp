#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "weylscan/run.hpp"

namespace {

int load_and(const std::string &config_path,
             int (*action)(const weylscan::RunConfig &, std::ostream &)) {
  try {
    const weylscan::RunConfig config = weylscan::RunConfig::load(config_path);
    return action(config, std::cout);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return weylscan::exit_config_error;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Spectral scans of Herglotz boundary data: Weyl functions of "
               "1-D and radial Schroedinger operators and finite matrix "
               "models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string model_path;
  std::string suite = "all";
  unsigned seed = 20260826;
  double lambda_re = -1.0, lambda_im = 0.0;

  CLI::App *scan = app.add_subcommand("scan", "Classify a grid of spectral points");
  scan->add_option("config", config_path, "run configuration file")->required();

  CLI::App *eigs = app.add_subcommand("eigs", "Detect and refine eigenvalues only");
  eigs->add_option("config", config_path, "run configuration file")->required();

  CLI::App *dtn = app.add_subcommand("dtn-modes",
                                     "Per-mode DtN/Weyl table (radial problems)");
  dtn->add_option("config", config_path, "run configuration file")->required();
  dtn->add_option("--re", lambda_re, "Re lambda (default -1)");
  dtn->add_option("--im", lambda_im, "Im lambda (default 0)");

  CLI::App *verify = app.add_subcommand("oracle-verify",
                                        "Run a named self-check suite");
  verify->add_option("suite", suite,
                     "suite name (lemma24 | bessel-free | sturm-free | empty | "
                     "all) or a config file with verify.suite");
  verify->add_option("--seed", seed, "seed for randomized checks");

  CLI::App *info = app.add_subcommand("model-info",
                                      "Structural facts about a stored matrix model");
  info->add_option("model", model_path, "matrix model JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : weylscan::exit_config_error;
  }

  if (scan->parsed())
    return load_and(config_path, [](const weylscan::RunConfig &c,
                                    std::ostream &log) {
      return weylscan::run_scan(c, log);
    });
  if (eigs->parsed())
    return load_and(config_path, weylscan::run_eigs);
  if (dtn->parsed()) {
    try {
      const weylscan::RunConfig config = weylscan::RunConfig::load(config_path);
      return weylscan::run_dtn_modes(config, {lambda_re, lambda_im}, std::cout);
    } catch (const std::exception &e) {
      std::cerr << "error: " << e.what() << "\n";
      return weylscan::exit_config_error;
    }
  }
  if (verify->parsed()) {
    std::string name = suite;
    if (std::filesystem::exists(suite)) {
      try {
        name = weylscan::RunConfig::load(suite).verify_suite;
      } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return weylscan::exit_config_error;
      }
      if (name.empty()) {
        std::cerr << "error: verify.suite: required field is missing\n";
        return weylscan::exit_config_error;
      }
    }
    return weylscan::run_oracle_verify(name, seed, std::cout);
  }
  if (info->parsed())
    return weylscan::run_model_info(model_path, std::cout);
  return weylscan::exit_config_error;
}
