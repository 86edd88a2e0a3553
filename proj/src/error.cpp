#include "affect/error.hpp"

namespace affect {

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::io:
      return ErrorCategory::io;
    case ErrorCode::incomplete_data:
    case ErrorCode::degenerate_label:
    case ErrorCode::schema_mismatch:
    case ErrorCode::format:
    case ErrorCode::version:
    case ErrorCode::checksum:
      return ErrorCategory::data;
    default:
      return ErrorCategory::validation;
  }
}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::range: return "range error";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::validation: return "validation error";
    case ErrorCode::config: return "config error";
    case ErrorCode::unsupported_anchor: return "unsupported anchor";
    case ErrorCode::no_regional_data: return "no regional data";
    case ErrorCode::invalid_candidate: return "invalid candidate";
    case ErrorCode::invalid_membership: return "invalid membership";
    case ErrorCode::incomplete_data: return "incomplete data";
    case ErrorCode::degenerate_label: return "degenerate label";
    case ErrorCode::schema_mismatch: return "schema mismatch";
    case ErrorCode::format: return "format error";
    case ErrorCode::version: return "version error";
    case ErrorCode::checksum: return "checksum error";
    case ErrorCode::io: return "i/o error";
  }
  return "error";
}

}  // namespace affect
