#pragma once

#include <stdexcept>
#include <string>

namespace affect {

enum class ErrorCode {
  range,
  parse,
  validation,
  config,
  unsupported_anchor,
  no_regional_data,
  invalid_candidate,
  invalid_membership,
  incomplete_data,
  degenerate_label,
  schema_mismatch,
  format,
  version,
  checksum,
  io,
};

// Coarse grouping used for process exit codes.
enum class ErrorCategory { io = 1, validation = 2, data = 3 };

ErrorCategory category_of(ErrorCode code) noexcept;
const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }
  int exit_code() const noexcept { return static_cast<int>(category()); }

 private:
  ErrorCode code_;
};

}  // namespace affect
