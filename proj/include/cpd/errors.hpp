#pragma once

#include <stdexcept>
#include <string>

namespace cpd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A process oracle cannot answer for the requested stratum.
class UnsupportedProcess : public Error {
 public:
  using Error::Error;
};

/// Every grid scored zero, so the weighted combination of candidates is undefined.
class NoSignal : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpd
