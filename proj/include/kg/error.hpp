#pragma once

#include <stdexcept>
#include <string>

namespace kg {

/// Bad or inconsistent input data (malformed files, unknown ids, empty
/// results where the pipeline needs something). Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid invocation or configuration. Maps to CLI exit code 1.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kg
