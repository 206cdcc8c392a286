#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rlc {

enum class ErrorCode {
  InvalidDimension = 1,
  InvalidParameter,
  OverdampedDomain,
  DimensionMismatch,
  HermiticityViolation,
  EigensolverFailure,
  StencilDomain,
  Precondition,
  UnknownTag,
  Config,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// C layer can map it onto a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rlc
