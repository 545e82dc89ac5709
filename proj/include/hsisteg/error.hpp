#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsisteg {

enum class ErrorKind {
  payload_too_large,
  truncated_stream,
  insufficient_capacity,
  dimension_mismatch,
  unsupported_format,
  alpha_not_supported,
  corrupt_file,
  io_failure,
  invalid_argument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::payload_too_large: return "payload too large";
    case ErrorKind::truncated_stream: return "truncated stream";
    case ErrorKind::insufficient_capacity: return "insufficient capacity";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::unsupported_format: return "unsupported format";
    case ErrorKind::alpha_not_supported: return "alpha channel not supported";
    case ErrorKind::corrupt_file: return "corrupt file";
    case ErrorKind::io_failure: return "i/o failure";
    case ErrorKind::invalid_argument: return "invalid argument";
  }
  return "unknown error";
}

// Single exception type for the library; callers branch on kind().
class StegoError : public std::runtime_error {
 public:
  StegoError(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hsisteg
