#pragma once

#include <stdexcept>
#include <string>

namespace splab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated: bad shape, out-of-range index, non-finite entry.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The index block covers the whole index set, so J^c is empty.
class NoComplement : public Error {
 public:
  using Error::Error;
};

/// The coefficient law lacks the cumulant structure a closed form needs.
class UnsupportedLaw : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace splab
