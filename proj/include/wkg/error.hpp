#pragma once
// Error type shared by every module.
//
// Domain failures carry a machine-readable code so the service layer can map
// them onto HTTP statuses and the agent loop can feed them back to a planner.

#include <stdexcept>
#include <string>
#include <string_view>

namespace wkg {

enum class ErrorCode {
  ConfigInvalid,
  UnknownResource,
  NonPositiveSpeed,
  StorageFull,
  ValidationFailed,
  ParseFailure,
  IoFailure,
  SyntaxError,
  TypeError,
  UnboundVariable,
  UnknownLabelOrType,
  IncompleteTrace,
  UnknownScope,
  UnknownQuestion,
  StepExhausted,
  ProviderUnavailable,
  MalformedReply,
  UnmatchedIntent,
  InvalidArgument,
  NotFound,
  WrongState,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::UnknownResource: return "UNKNOWN_RESOURCE";
    case ErrorCode::NonPositiveSpeed: return "NON_POSITIVE_SPEED";
    case ErrorCode::StorageFull: return "STORAGE_FULL";
    case ErrorCode::ValidationFailed: return "VALIDATION_FAILED";
    case ErrorCode::ParseFailure: return "PARSE_FAILURE";
    case ErrorCode::IoFailure: return "IO_FAILURE";
    case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
    case ErrorCode::TypeError: return "TYPE_ERROR";
    case ErrorCode::UnboundVariable: return "UNBOUND_VARIABLE";
    case ErrorCode::UnknownLabelOrType: return "UNKNOWN_LABEL_OR_TYPE";
    case ErrorCode::IncompleteTrace: return "INCOMPLETE_TRACE";
    case ErrorCode::UnknownScope: return "UNKNOWN_SCOPE";
    case ErrorCode::UnknownQuestion: return "UNKNOWN_QUESTION";
    case ErrorCode::StepExhausted: return "STEP_EXHAUSTED";
    case ErrorCode::ProviderUnavailable: return "PROVIDER_UNAVAILABLE";
    case ErrorCode::MalformedReply: return "MALFORMED_REPLY";
    case ErrorCode::UnmatchedIntent: return "UNMATCHED_INTENT";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::WrongState: return "WRONG_STATE";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace wkg
