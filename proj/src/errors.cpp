#include "dq/errors.hpp"

namespace dq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::PositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotPoisson: return "NotPoisson";
    case ErrorCode::NonConstantCoefficients: return "NonConstantCoefficients";
    case ErrorCode::NotPoissonField: return "NotPoissonField";
    case ErrorCode::NotPoissonAction: return "NotPoissonAction";
    case ErrorCode::NotHomomorphism: return "NotHomomorphism";
    case ErrorCode::InvalidLieAlgebra: return "InvalidLieAlgebra";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::RHSNotClosed: return "RHSNotClosed";
    case ErrorCode::MCDefect: return "MCDefect";
    case ErrorCode::AnsatzExhausted: return "AnsatzExhausted";
    case ErrorCode::NotADerivation: return "NotADerivation";
    case ErrorCode::TruncationMismatch: return "TruncationMismatch";
    case ErrorCode::IntegrityFailure: return "IntegrityFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ResolveError: return "ResolveError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

namespace {

std::string located(int line, int column, const std::string& token, const std::string& message) {
  std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  if (!token.empty()) out += " (at '" + token + "')";
  return out;
}

}  // namespace

ParseError::ParseError(int line, int column, std::string token, const std::string& message, ErrorCode code)
    : Error(code, located(line, column, token, message)),
      line_(line),
      column_(column),
      token_(std::move(token)) {}

}  // namespace dq
