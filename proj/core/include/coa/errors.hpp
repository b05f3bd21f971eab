#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coa {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// The model definition produced an invalid value (NaN rate, negative kernel
/// sample, unbounded total mutation rate).
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// A quadrature node evaluation returned a non-finite value.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::size_t node)
      : Error(what), node(node) {}
  std::size_t node;
};

/// Matrix assembly hit a non-finite sample; carries the offending entry.
class AssemblyError : public Error {
 public:
  AssemblyError(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row(row), col(col) {}
  std::size_t row;
  std::size_t col;
};

/// alpha at or below -min_k w(t_k), where (T_n + alpha) is singular.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// The bisection bracket does not contain the eigenvalue.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Power iteration ran out of iterations; carries the last increment.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_increment,
                   long iterations)
      : Error(what), last_increment(last_increment), iterations(iterations) {}
  double last_increment;
  long iterations;
};

/// The support graph of the mutation matrix is not strongly connected.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class IncompatiblePartitionError : public Error {
 public:
  using Error::Error;
};

class DegenerateDensityError : public Error {
 public:
  using Error::Error;
};

/// Configuration syntax or semantics problem. Syntax errors carry the
/// location; semantic errors name the offending key in the message.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0, int column = 0)
      : Error(what), line(line), column(column) {}
  int line;
  int column;
};

}  // namespace coa
