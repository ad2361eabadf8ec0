#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace isoclass {

enum class ErrorCode {
  InvalidModulus,
  FieldMismatch,
  NonMonic,
  ZeroConstantTerm,
  ExcludedRoot,
  ZeroPolynomial,
  Reducible,
  DimensionMismatch,
  Degenerate,
  NotSymmetric,
  Singular,
  NotAnIsometry,
  NotPrimary,
  NotFree,
  SearchExhausted,
  SingularSystem,
  NotUnimodular,
  AlgebraMismatch,
  TooLarge,
  SpaceMismatch,
  NotConjugate,
  WitnessUnavailable,
  OutOfRange,
  Parse,
  Internal,
};

// Stable snake_case names; these appear verbatim in CLI error JSON.
constexpr std::string_view error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidModulus: return "invalid_modulus";
    case ErrorCode::FieldMismatch: return "field_mismatch";
    case ErrorCode::NonMonic: return "non_monic";
    case ErrorCode::ZeroConstantTerm: return "zero_constant_term";
    case ErrorCode::ExcludedRoot: return "excluded_root";
    case ErrorCode::ZeroPolynomial: return "zero_polynomial";
    case ErrorCode::Reducible: return "reducible";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::Degenerate: return "degenerate_form";
    case ErrorCode::NotSymmetric: return "not_symmetric";
    case ErrorCode::Singular: return "singular";
    case ErrorCode::NotAnIsometry: return "not_an_isometry";
    case ErrorCode::NotPrimary: return "not_primary";
    case ErrorCode::NotFree: return "not_free";
    case ErrorCode::SearchExhausted: return "search_exhausted";
    case ErrorCode::SingularSystem: return "singular_system";
    case ErrorCode::NotUnimodular: return "not_unimodular";
    case ErrorCode::AlgebraMismatch: return "algebra_mismatch";
    case ErrorCode::TooLarge: return "too_large";
    case ErrorCode::SpaceMismatch: return "space_mismatch";
    case ErrorCode::NotConjugate: return "not_conjugate";
    case ErrorCode::WitnessUnavailable: return "witness_unavailable";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Internal: return "internal_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace isoclass
