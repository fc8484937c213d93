#include "pttunnel/errors.hpp"

namespace pttunnel {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidEnergy: return "InvalidEnergy";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ZeroOfT: return "ZeroOfT";
    case ErrorCode::SpectralSingularity: return "SpectralSingularity";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::DegenerateV: return "DegenerateV";
  }
  return "Unknown";
}

}  // namespace pttunnel
