#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dq {

enum class ErrorCode {
  DimensionMismatch,
  ArityMismatch,
  PositionOutOfRange,
  MalformedInput,
  NotClosed,
  NotPoisson,
  NonConstantCoefficients,
  NotPoissonField,
  NotPoissonAction,
  NotHomomorphism,
  InvalidLieAlgebra,
  KindMismatch,
  RHSNotClosed,
  MCDefect,
  AnsatzExhausted,
  NotADerivation,
  TruncationMismatch,
  IntegrityFailure,
  ParseError,
  ResolveError,
  UsageError,
};

std::string_view to_string(ErrorCode code);

/// Engine error. Every failure surfaced to callers carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Failure with a 1-based source location. The code is ParseError, ResolveError, or the engine
/// error raised while building a definition.
class ParseError : public Error {
 public:
  ParseError(int line, int column, std::string token, const std::string& message,
             ErrorCode code = ErrorCode::ParseError);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  int line_;
  int column_;
  std::string token_;
};

}  // namespace dq
