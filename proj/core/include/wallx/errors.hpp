#pragma once
#include <stdexcept>
#include <string>

namespace wallx {

// Bad input: malformed config, infeasible request, precondition violation by the caller.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& m) : std::runtime_error(m) {}
};

// The engine derived contradictory results (a mathematical identity failed to hold,
// a solve came back inconsistent, a limit that must exist does not, ...).
struct InternalCheckError : std::runtime_error {
  explicit InternalCheckError(const std::string& m) : std::runtime_error(m) {}
};

// Command-line usage problems (unknown flags, missing arguments).
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace wallx
