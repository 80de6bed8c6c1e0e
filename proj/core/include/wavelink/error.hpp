#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavelink {

enum class ErrorCode {
  InvalidArgument,
  Io,
  Parse,
  InsufficientData,
  Numerical,
  Unsupported,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a stable machine-readable code
// next to the human message. The CLI prints both on one line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace wavelink
