#pragma once
// Error taxonomy shared across the library. The CLI maps these onto its
// documented exit codes: validation/usage -> 1, pipeline failure -> 2,
// not-equivalent verdict -> 3.

#include <stdexcept>
#include <string>

namespace atlas {

// Invalid construction parameters or malformed user input.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A computation that started from valid inputs could not finish cleanly:
// solver non-convergence, a wander label on a map edge, exhausted fallback
// search, and similar mid-pipeline failures.
class PipelineError : public std::runtime_error {
 public:
  explicit PipelineError(const std::string& msg) : std::runtime_error(msg) {}
};

// Two maps or signatures that an operation requires to be equivalent differ.
class NotEquivalentError : public std::runtime_error {
 public:
  explicit NotEquivalentError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace atlas
