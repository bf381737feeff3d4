#pragma once

#include <stdexcept>
#include <string>

namespace pie {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourcePosition {
  int line = 1;
  int column = 1;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePosition pos, const std::string& what)
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + what),
        position_(pos) {}

  SourcePosition position() const { return position_; }

 private:
  SourcePosition position_;
};

// A symbol used with two different arities, or a λ/predicate arity mismatch.
class ArityError : public Error {
 public:
  using Error::Error;
};

class MacroError : public Error {
 public:
  using Error::Error;
};

// Input outside the fragment an operation accepts (e.g. second-order content
// handed to a first-order routine).
class FragmentError : public Error {
 public:
  using Error::Error;
};

class UnskolemizeError : public Error {
 public:
  using Error::Error;
};

class EliminationError : public Error {
 public:
  using Error::Error;
};

class TableauError : public Error {
 public:
  using Error::Error;
};

// No interpolant: either the implication is not valid (a countermodel was
// found) or the prover gave up.
class InterpolationError : public Error {
 public:
  InterpolationError(const std::string& what, bool not_valid) : Error(what), not_valid_(not_valid) {}
  bool not_valid() const { return not_valid_; }

 private:
  bool not_valid_;
};

}  // namespace pie
