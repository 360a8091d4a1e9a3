#pragma once

#include <stdexcept>
#include <string>

namespace erd {

/// Instance or experiment parameters that cannot be used as given.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Caller broke an operation's precondition (stepping a finished episode,
/// out-of-range joint index, ...).
class UsageError : public std::logic_error {
 public:
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

/// Malformed instance or config document.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& field, const std::string& what, int line = 0)
      : std::runtime_error(format(field, what, line)), field_(field), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, const std::string& what, int line) {
    std::string out = "parse error";
    if (line > 0) out += " at line " + std::to_string(line);
    if (!field.empty()) out += " (field '" + field + "')";
    return out + ": " + what;
  }

  std::string field_;
  int line_;
};

class VersionError : public std::runtime_error {
 public:
  VersionError(int found, int expected)
      : std::runtime_error("unsupported schema_version " + std::to_string(found) +
                           " (this build reads version " + std::to_string(expected) + ")"),
        found_(found) {}

  int found() const noexcept { return found_; }

 private:
  int found_;
};

class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class PlanningError : public std::runtime_error {
 public:
  explicit PlanningError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace erd
