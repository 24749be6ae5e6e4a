#pragma once

#include <stdexcept>
#include <string>

namespace attnlab {

/// Operand shapes do not fit the operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scalar parameter is outside its admissible range (e.g. temperature <= 0).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input values fall outside the domain of an elementwise map.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A division by a zero row/column/total sum, an empty neighbour list, etc.
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition (stability bound, excluded dimension) is violated.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed external input (IDX files, configs).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string shape_string(long rows, long cols);

}  // namespace attnlab
