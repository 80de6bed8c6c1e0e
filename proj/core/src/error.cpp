#include "wavelink/error.hpp"

namespace wavelink {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Io: return "io";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::InsufficientData: return "insufficient_data";
    case ErrorCode::Numerical: return "numerical";
    case ErrorCode::Unsupported: return "unsupported";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace wavelink
