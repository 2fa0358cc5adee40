#pragma once

#include <stdexcept>
#include <string>

namespace pgfi {

enum class ErrorCode {
  DivisionByZero,
  NonPolynomialExpArgument,
  PoleAtOrigin,
  EvaluationPole,
  MissingAssignment,
  ZeroMassConditioning,
  InvariantRefuted,
  UnsupportedConstruct,
  Parse,
  CapExceeded,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : Error(ErrorCode::Parse,
              std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace pgfi
