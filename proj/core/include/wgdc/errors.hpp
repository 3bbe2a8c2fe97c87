#pragma once

#include <stdexcept>
#include <string>

namespace wgdc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: mesh files, configuration, case names.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: singular local matrices, failed solves.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace wgdc
