#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mtforge {

// Every failure surfaced by the library carries one of these codes. Tests and
// the CLI dispatch on the code, never on the message text.
enum class ErrorCode {
  InvalidArgument,
  PreconditionViolation,
  MetricMismatch,
  EndpointUnavailable,
  MalformedResponse,
  UnknownTemplate,
  PlaceholderMissing,
  InfeasibleMixture,
  CatalogTooSmall,
  CatalogInvalid,
  RegexCompileError,
  MarkerMissing,
  ParseFailure,
  AllCandidatesFailed,
  UtilityFailure,
  EmptyCorpus,
  RuleCountMismatch,
  EmptyOutcomes,
  UnknownLanguageGroup,
  InvalidTransition,
  ConfigInvalid,
  DataError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  // Machine-oriented detail, e.g. the missing marker name or the field list.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, std::string detail);

inline void require(bool condition, ErrorCode code, std::string_view detail) {
  if (!condition) fail(code, std::string(detail));
}

}  // namespace mtforge
