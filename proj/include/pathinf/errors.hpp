#pragma once

#include <stdexcept>
#include <string>

namespace pathinf {

// Invalid user-supplied configuration (bad flag value, infeasible edge
// count, out-of-range probability). CLI exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched widths / out-of-range indices between inputs that must agree.
// Treated as a validation failure by the CLI (exit code 2).
class DimensionError : public std::runtime_error {
  public:
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable or malformed input file (CSV cell, JSON schema). CLI exit code 3.
class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Candidate enumeration would exceed the configured cap. CLI exit code 4.
class CapacityError : public std::runtime_error {
  public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// A caller violated an operation's stated precondition.
class ContractViolation : public std::logic_error {
  public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// A result that the pipeline's own invariants should rule out (e.g. pruning
// removed every state).
class DegenerateResultError : public std::runtime_error {
  public:
    explicit DegenerateResultError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pathinf
