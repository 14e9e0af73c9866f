#pragma once

#include <stdexcept>
#include <string>

namespace gqlimit {

// Bad user input or out-of-range arguments. The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

// Solver/iteration failures. The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, int suggested_k, int suggested_n)
      : NumericalError(what), suggested_k_(suggested_k), suggested_n_(suggested_n) {}

  int suggested_k() const { return suggested_k_; }
  int suggested_n() const { return suggested_n_; }

 private:
  int suggested_k_;
  int suggested_n_;
};

}  // namespace gqlimit
