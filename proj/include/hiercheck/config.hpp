#ifndef HIERCHECK_CONFIG_HPP
#define HIERCHECK_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hiercheck/calibration.hpp"
#include "hiercheck/checks.hpp"
#include "hiercheck/loo.hpp"
#include "hiercheck/model.hpp"

namespace hiercheck {

// Flat [section] / key = value text. Full-line comments start with '#' or ';'.
// Unknown sections or keys are configuration errors.
struct IniDoc {
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& section) const { return sections.count(section) > 0; }
};

IniDoc parse_ini_file(const std::string& path);
IniDoc parse_ini_text(const std::string& text, const std::string& origin);

struct OutputSpec {
  std::string path;
  std::string format = "table";  // table | structured
};

struct RunConfig {
  std::string data_path;
  ModelSpec model;
  std::string method;  // ppc | cv | cv-fast
  CheckConfig check;
  LooConfig loo;
  OutputSpec output;
};

struct CalibrationRunConfig {
  ScenarioSpec scenario;
  int replicates = 1;
  double alpha = 0.05;
  ModelSpec model;
  std::string method;
  CheckConfig check;
  LooConfig loo;
  OutputSpec output;
};

RunConfig parse_check_config(const IniDoc& doc);
CalibrationRunConfig parse_calibration_config(const IniDoc& doc);

}  // namespace hiercheck

#endif
