#pragma once

#include <stdexcept>
#include <string>

namespace kserver {

enum class ErrorCode {
  NonSquare,
  AsymmetricDistance,
  TriangleViolation,
  ZeroOffDiagonal,
  NonZeroDiagonal,
  NegativeDistance,
  InvalidPointName,
  KExceedsN,
  InvalidConfiguration,
  InvalidRequest,
  NonPositiveEpsilon,
  InvalidArgument,
  DegenerateKEqualsN,
  InstanceTooLarge,
  UnknownFormat,
  ParseError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kserver
