#pragma once

#include <stdexcept>
#include <string>

namespace phasespace {

/// Rejected input: bad parameters, violated preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two fields (or a field and an operator) live on different grids.
class GridMismatch : public ValidationError {
 public:
  GridMismatch() : ValidationError("phase grids do not match") {}
  explicit GridMismatch(const std::string& what) : ValidationError(what) {}
};

/// Time stepping diverged; usually dt exceeds the stability limit of the generator.
class NumericalInstability : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written, or had a malformed layout.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phasespace
