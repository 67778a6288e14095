#pragma once

#include <stdexcept>
#include <string>

namespace polariton {

// Bad user input: malformed config, unreadable field file, out-of-range
// parameters supplied from outside the library.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation that was set up correctly but could not be completed
// (solver non-convergence, runaway order parameter, failed bracketing).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failures specific to locating Mott-lobe boundaries.
class BoundaryError : public NumericalError {
 public:
  enum class Kind { kOutsideLobe, kNotBracketed, kEmptyLobe };

  BoundaryError(Kind kind, const std::string& what)
      : NumericalError(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace polariton
