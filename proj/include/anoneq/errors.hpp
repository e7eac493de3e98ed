#pragma once

#include <stdexcept>
#include <string>

namespace anoneq {

// Input files that do not match the documented formats. Carries the
// 1-based line number where parsing gave up (0 when unknown / EOF).
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A requested computation would exceed a configured size guardrail
// (enumeration count, padding size, grid size, ...).
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// The probability grid cannot host any distribution (floor too large).
class infeasible_grid_error : public std::invalid_argument {
 public:
  explicit infeasible_grid_error(const std::string& what) : std::invalid_argument(what) {}
};

// A documented precondition of an operation was violated by the caller.
class precondition_error : public std::runtime_error {
 public:
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// A solver produced output that failed its own verification, or an
// internal invariant that should hold by construction did not.
class internal_consistency_error : public std::runtime_error {
 public:
  explicit internal_consistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace anoneq
