#ifndef HIERCHECK_RUNNER_HPP
#define HIERCHECK_RUNNER_HPP

#include <iosfwd>
#include <string>

namespace hiercheck {

// Exit codes shared by the CLI and the library entry points:
// 0 success, 1 usage/config, 2 data validation, 3 runtime failure.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_data = 2;
inline constexpr int exit_runtime = 3;

int run_check(const std::string& config_path, std::ostream& out, std::ostream& err);
int run_calibration(const std::string& config_path, std::ostream& out, std::ostream& err);
int run_validate(const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace hiercheck

#endif
