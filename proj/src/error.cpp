#include "hberry/error.hpp"

namespace hberry {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::InvalidConfig: return "invalid_config";
    case ErrorCode::InvalidLoop: return "invalid_loop";
    case ErrorCode::NotSkewOrthonormal: return "not_skew_orthonormal";
    case ErrorCode::GridMismatch: return "grid_mismatch";
    case ErrorCode::ImaginaryFrequency: return "imaginary_frequency";
    case ErrorCode::Resonance: return "resonance";
    case ErrorCode::AxisSingularity: return "axis_singularity";
    case ErrorCode::ZeroField: return "zero_field";
    case ErrorCode::ToleranceFailure: return "tolerance_failure";
    case ErrorCode::QuadratureFailure: return "quadrature_failure";
    case ErrorCode::Io: return "io_failure";
  }
  return "unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ImaginaryFrequency:
    case ErrorCode::Resonance:
    case ErrorCode::AxisSingularity:
    case ErrorCode::ZeroField:
    case ErrorCode::ToleranceFailure:
    case ErrorCode::QuadratureFailure:
      return 2;
    case ErrorCode::Io:
      return 3;
    default:
      return 1;
  }
}

}  // namespace hberry
