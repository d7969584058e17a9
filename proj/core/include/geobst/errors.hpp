#pragma once

#include <stdexcept>
#include <string>

namespace geobst {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coordinate or size lies outside the declared grid.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A point or point set breaks the geometric model (invalid cell, unsatisfied
/// precondition, broken invariant).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// An update sequence breaks the insert/delete alternation rules.
class SequenceError : public Error {
 public:
  using Error::Error;
};

/// Input has the wrong overall shape for an operation (not a deque sequence,
/// not a permutation, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace geobst
