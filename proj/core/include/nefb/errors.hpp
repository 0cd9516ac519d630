#pragma once

#include <stdexcept>
#include <string>

namespace nefb {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input bytes or text do not follow the expected file format.
class FormatError : public Error {
 public:
  using Error::Error;
};

class BadMagicError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedFileError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Image and label files disagree on the number of items.
class CountMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Shapes, versions or feature schemas of two artifacts do not match.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument values (ranges, empty sets, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not continue (degenerate input, no positive edge).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace nefb
