#pragma once

#include <stdexcept>
#include <string>

namespace duokey {

// Base for every error raised by the library. Subclasses map one-to-one onto
// the CLI exit codes and HTTP statuses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand widths disagree (permute, xor, hamming distance).
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-range input: bad bit strings, bad hex, bad tables.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A persisted file or uploaded payload could not be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace duokey
