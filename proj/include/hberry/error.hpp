#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hberry {

enum class ErrorCode {
  InvalidArgument,
  InvalidConfig,
  InvalidLoop,
  NotSkewOrthonormal,
  GridMismatch,
  ImaginaryFrequency,
  Resonance,
  AxisSingularity,
  ZeroField,
  ToleranceFailure,
  QuadratureFailure,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Process exit status for a failure of this kind: 1 validation, 2 numerical, 3 I/O.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<double> s = std::nullopt)
      : std::runtime_error(what), code_(code), s_(s) {}

  ErrorCode code() const noexcept { return code_; }
  /// Slow time where the failure was detected, when it is localized.
  std::optional<double> where() const noexcept { return s_; }

 private:
  ErrorCode code_;
  std::optional<double> s_;
};

}  // namespace hberry
