#include "conflab/error.hpp"

namespace conflab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DivisionByZeroFunction: return "DivisionByZeroFunction";
    case ErrorCode::PoleAtPoint: return "PoleAtPoint";
    case ErrorCode::NonRationalValue: return "NonRationalValue";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InvalidSignature: return "InvalidSignature";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::DegenerateAtPoint: return "DegenerateAtPoint";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::NotConformal: return "NotConformal";
    case ErrorCode::PoleOnPath: return "PoleOnPath";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DerivativeTooSmall: return "DerivativeTooSmall";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::InadmissibleLambda: return "InadmissibleLambda";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::MismatchBetweenMethods: return "MismatchBetweenMethods";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace conflab
