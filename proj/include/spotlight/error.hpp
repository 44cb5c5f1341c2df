#pragma once

#include <stdexcept>
#include <string>

namespace spotlight {

/// Malformed or unreadable input data (record files, fact files, log-probs).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value or key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of a metric or loss operation was violated by the caller.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by an entailment oracle that could not produce a verdict.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spotlight
