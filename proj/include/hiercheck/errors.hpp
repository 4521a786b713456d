#ifndef HIERCHECK_ERRORS_HPP
#define HIERCHECK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hiercheck {

// Configuration problems (bad keys, invalid model settings, unusable options).
// The CLI maps these to exit code 1.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Data problems (unreadable files, non-finite values, too few groups for the
// requested analysis, degenerate observations). CLI exit code 2.
class data_error : public std::runtime_error {
public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hiercheck

#endif
