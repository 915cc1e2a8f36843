#pragma once

#include <stdexcept>
#include <string>

namespace lmg {

/// Rejected model parameters (N < 1, negative coupling, ...).
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iteration caps exceeded, failed brackets and similar numerical breakdowns.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Parity tags below the separatrix do not alternate even/odd.
class PairingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Fewer usable data points than a fit requires.
class InsufficientData : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed or out-of-range configuration; `key()` names the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lmg
