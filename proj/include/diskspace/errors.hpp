#pragma once

#include <stdexcept>
#include <string>

namespace diskspace {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point was requested outside the open unit disk (or outside the
/// convergence ball of a truncated map).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An argument violates an operation's precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The expression contains a node the operation cannot handle.
class UnsupportedNode : public Error {
 public:
  using Error::Error;
};

class NotAGapSequence : public Error {
 public:
  using Error::Error;
};

/// A witness search used its whole budget without finding a point.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

class ZeroClassError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input (function specs, maps, manifests).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace diskspace
