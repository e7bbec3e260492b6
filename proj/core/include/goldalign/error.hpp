#pragma once

#include <stdexcept>
#include <string>

namespace goldalign {

/// Base class for every domain error raised by the library. The CLI maps
/// these to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data: bad UTF-8, unreadable files, coverage mismatches.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Parallel files whose line counts disagree.
class AlignmentError : public Error {
 public:
  AlignmentError(std::size_t e_lines, std::size_t f_lines, const std::string& detail)
      : Error(detail), e_lines_(e_lines), f_lines_(f_lines) {}

  std::size_t e_lines() const noexcept { return e_lines_; }
  std::size_t f_lines() const noexcept { return f_lines_; }

 private:
  std::size_t e_lines_;
  std::size_t f_lines_;
};

/// Syntax or structural violation in a data file. Carries the 1-based line
/// number when one is known (0 otherwise).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A word position outside its verse half.
class RangeError : public FormatError {
 public:
  using FormatError::FormatError;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The stratified sampler ran out of replacement candidates in one stratum.
class SamplingInfeasible : public Error {
 public:
  SamplingInfeasible(unsigned frequency, const std::string& what)
      : Error(what), frequency_(frequency) {}

  unsigned frequency() const noexcept { return frequency_; }

 private:
  unsigned frequency_;
};

/// A rate whose denominator is zero.
class UndefinedRate : public Error {
 public:
  using Error::Error;
};

/// A finalized annotation that leaves positions unaccounted for.
class IncompleteAnnotation : public Error {
 public:
  using Error::Error;
};

}  // namespace goldalign
