#pragma once

#include <stdexcept>
#include <string>

namespace diagcalc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph, path or presentation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A query that needs finite hom-sets was made on a cyclic shape.
class NotAcyclicError : public Error {
 public:
  using Error::Error;
};

// Domain/codomain mismatch between semantic objects or morphisms.
class TypeError : public Error {
 public:
  using Error::Error;
};

// A diagram, morphism or wiring diagram violates one of its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace diagcalc
