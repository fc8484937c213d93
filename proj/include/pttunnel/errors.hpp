#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pttunnel {

/// Typed failure conditions raised by the numerical routines.
enum class ErrorCode {
  InvalidInput,
  InvalidEnergy,
  NonFinite,
  ZeroOfT,              // argument is a root of T_N, the phase jumps by pi there
  SpectralSingularity,  // transmission diverges (zero of G)
  Overflow,             // quantity not representable in double precision
  DegenerateV,          // V = 0 has no Hartman regime
};

std::string_view to_string(ErrorCode code) noexcept;

class NumericError : public std::runtime_error {
 public:
  NumericError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pttunnel
