#include "mtforge/core/error.hpp"

namespace mtforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::MetricMismatch: return "MetricMismatch";
    case ErrorCode::EndpointUnavailable: return "EndpointUnavailable";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::UnknownTemplate: return "UnknownTemplate";
    case ErrorCode::PlaceholderMissing: return "PlaceholderMissing";
    case ErrorCode::InfeasibleMixture: return "InfeasibleMixture";
    case ErrorCode::CatalogTooSmall: return "CatalogTooSmall";
    case ErrorCode::CatalogInvalid: return "CatalogInvalid";
    case ErrorCode::RegexCompileError: return "RegexCompileError";
    case ErrorCode::MarkerMissing: return "MarkerMissing";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::AllCandidatesFailed: return "AllCandidatesFailed";
    case ErrorCode::UtilityFailure: return "UtilityFailure";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::RuleCountMismatch: return "RuleCountMismatch";
    case ErrorCode::EmptyOutcomes: return "EmptyOutcomes";
    case ErrorCode::UnknownLanguageGroup: return "UnknownLanguageGroup";
    case ErrorCode::InvalidTransition: return "InvalidTransition";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::DataError: return "DataError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(std::move(detail)) {}

void fail(ErrorCode code, std::string detail) { throw Error(code, std::move(detail)); }

}  // namespace mtforge
