#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hiercheck/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hiercheck: posterior predictive checking for two-level hierarchical models"};
  app.require_subcommand(1);

  std::string check_config, calibrate_config, validate_config;
  auto* check = app.add_subcommand("check", "Run a posterior predictive check");
  check->add_option("--config", check_config, "Run configuration file")->required();
  auto* calibrate =
      app.add_subcommand("calibrate", "Simulate p-value distributions and power");
  calibrate->add_option("--config", calibrate_config, "Study configuration file")->required();
  auto* validate = app.add_subcommand("validate", "Lint a configuration (and its data file)");
  validate->add_option("--config", validate_config, "Configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? hiercheck::exit_ok : hiercheck::exit_config;
  }

  if (check->parsed()) return hiercheck::run_check(check_config, std::cout, std::cerr);
  if (calibrate->parsed())
    return hiercheck::run_calibration(calibrate_config, std::cout, std::cerr);
  return hiercheck::run_validate(validate_config, std::cout, std::cerr);
}
