#pragma once

#include <stdexcept>
#include <string>

namespace nlsm {

// A computation was refused because a numerical budget (mode count, grid
// size, time resolution) would be exceeded or is insufficient. The message
// always states the required budget.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs live on incompatible bases, grids or manifolds.
class MismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Time integration detected norm blow-up.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid run configuration (CLI layer). `line` is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& reason, int line = 0, const std::string& file = {})
      : std::runtime_error(format(reason, line, file)), reason_(reason), line_(line), file_(file) {}
  const std::string& reason() const noexcept { return reason_; }
  int line() const noexcept { return line_; }
  const std::string& file() const noexcept { return file_; }

 private:
  static std::string format(const std::string& reason, int line, const std::string& file) {
    std::string where = file;
    if (line > 0) where += (file.empty() ? "line " : ":") + std::to_string(line);
    return where.empty() ? reason : where + ": " + reason;
  }
  std::string reason_;
  int line_;
  std::string file_;
};

}  // namespace nlsm
