#pragma once

#include <stdexcept>
#include <string>

namespace bbm {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridMismatch : public Error {
 public:
  GridMismatch() : Error("operands live on different frequency grids") {}
};

/// A result would need frequencies beyond the grid cutoff.
class SupportOverflow : public Error {
 public:
  using Error::Error;
};

class Undersampling : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class QuadratureNonConvergence : public Error {
 public:
  using Error::Error;
};

/// Picard series requested outside the regime c*T*|u0|_{FL1} < 1.
class ConvergenceRegimeError : public Error {
 public:
  using Error::Error;
};

class BlowUp : public Error {
 public:
  using Error::Error;
};

class NonContraction : public Error {
 public:
  NonContraction(double ratio, const std::string& what) : Error(what), ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

class InfeasibleSchedule : public Error {
 public:
  using Error::Error;
};

/// An exact identity or a proven bound failed: an implementation bug.
class IdentityViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace bbm
