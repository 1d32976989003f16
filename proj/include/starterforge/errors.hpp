#pragma once

#include <stdexcept>
#include <string>

namespace starterforge {

// Caller handed us something outside a documented precondition (bad q, wrong
// field, failed membership, malformed record). Maps to CLI exit code 1.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A fact the underlying theorems guarantee failed to hold at runtime. Never
// expected to fire on valid inputs; if it does, either the input slipped past
// validation or there is an arithmetic bug worth a bug report.
class TheoremViolation : public std::runtime_error {
 public:
  explicit TheoremViolation(const std::string& what) : std::runtime_error(what) {}
};

// Two internal computation paths that must agree did not (e.g. the coset
// partition failed to tile F_q^*). Always a bug. Maps to CLI exit code 3.
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace starterforge
