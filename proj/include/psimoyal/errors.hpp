#pragma once

#include <stdexcept>

namespace psimoyal {

/// Bad arguments, shapes or labels. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable, truncated or unwritable files. Exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, failed internal consistency checks, exceeded
/// tolerances. Exit code 3.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace psimoyal
