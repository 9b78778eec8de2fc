#ifndef MDL_ERRORS_H_
#define MDL_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdl {

// Raised on non-finite coordinates, mismatched shapes, out-of-range
// parameters and non-convex polygons handed to the geometry routines.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A covariance matrix that stays singular after regularization.
class SingularCovarianceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A finite-difference probe produced a non-finite function value.
class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line),
        message_(what) {}

  // 1-based line number of the offending input line.
  std::size_t line() const noexcept { return line_; }
  // The message without the line prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

}  // namespace mdl

#endif  // MDL_ERRORS_H_
