#pragma once

#include <stdexcept>
#include <string>

namespace graphplan {

// Exit status categories shared by the library and the CLI.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kModel = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Bad flags, bad config values, failed preconditions on user-supplied
// parameters.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ExitCode::kUsage, what) {}
};

// Malformed or missing input files, unknown ids.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ExitCode::kData, what) {}
};

// Dimension mismatches, invalid scores, numerically impossible states.
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(ExitCode::kModel, what) {}
};

}  // namespace graphplan
