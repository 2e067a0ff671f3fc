#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loopsynth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-sorted application or operator arity mismatch.
class SortError : public Error {
 public:
  using Error::Error;
};

/// A context or skeleton did not carry exactly one hole.
class HoleCountError : public Error {
 public:
  using Error::Error;
};

/// Lexing or parsing failure. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(line == 0 ? msg
                        : std::to_string(line) + ":" + std::to_string(column) +
                              ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Runtime failure during evaluation (integer overflow, bad call).
class EvalError : public Error {
 public:
  using Error::Error;
};

class FuelExhausted : public EvalError {
 public:
  using EvalError::EvalError;
};

class UnboundVariable : public EvalError {
 public:
  using EvalError::EvalError;
};

}  // namespace loopsynth
