#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apiclarify {

enum class ErrorCode {
  RejectedNoEvent,
  DuplicateConflict,
  UnknownEndpoint,
  FormatError,
  NoVerbFound,
  EmptyIndex,
  EmptySubgraph,
  EmptyInput,
  UnknownAspect,
  SessionFinished,
  UnknownOption,
  UnknownApi,
  LengthMismatch,
  BlankQuery,
  NoCandidates,
  UnknownSession,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RejectedNoEvent: return "RejectedNoEvent";
    case ErrorCode::DuplicateConflict: return "DuplicateConflict";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::NoVerbFound: return "NoVerbFound";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::EmptySubgraph: return "EmptySubgraph";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnknownAspect: return "UnknownAspect";
    case ErrorCode::SessionFinished: return "SessionFinished";
    case ErrorCode::UnknownOption: return "UnknownOption";
    case ErrorCode::UnknownApi: return "UnknownApi";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BlankQuery: return "BlankQuery";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception; `code()` is the
/// stable, machine-readable part and the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace apiclarify
