#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsci {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text (bitstrings, Pauli words, measurement or config files).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Parse failure tied to a 1-based line of an input file.
class ParseError : public FormatError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : FormatError("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// Request exceeds what the engine supports (qubit cap, sector size, mask width).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Mismatched or degenerate dimensions (empty matrix, differing orbital counts).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Caller supplied inconsistent data (duplicates, overlapping sets, empty inputs).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Hole not occupied or particle already occupied.
class InvalidExcitation : public Error {
 public:
  using Error::Error;
};

/// Out-of-range numeric parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit with no spread in the abscissa.
class SingularFitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Process exit status for an error: 3 I/O, 4 parse/format, 5 capability,
/// 6 convergence (see eigensolver.hpp), 2 bad parameters or input, 1 otherwise.
int exit_code(const std::exception& e) noexcept;

/// Short machine-readable name of the error class.
const char* error_kind(const std::exception& e) noexcept;

}  // namespace qsci
