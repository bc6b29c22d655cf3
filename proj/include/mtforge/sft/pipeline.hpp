#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mtforge/gateway/gateway.hpp"
#include "mtforge/sft/record.hpp"
#include "mtforge/sft/triage.hpp"

namespace mtforge::sft {

struct CurationOptions {
  std::string judge_endpoint;
  std::string reward_endpoint;
  std::vector<std::string> teacher_endpoints;  // may be empty when records carry candidates
  std::optional<std::string> translation_judge_endpoint;  // scores Translation records' selected answer
  std::set<std::string, std::less<>> allowlist = default_allowlist();
  int keep_threshold = kKeepThreshold;
  std::size_t concurrency = 4;
  // Unparseable triage output: false drops the record and counts it, true aborts.
  bool strict = false;
};

struct CurationCounts {
  std::size_t ingested = 0;
  std::size_t triaged = 0;
  std::size_t triage_failures = 0;
  std::size_t kept = 0;
  std::size_t candidates_scored = 0;
  std::size_t selected = 0;
  std::size_t selection_failures = 0;

  Json to_json() const;
};

struct CurationResult {
  std::vector<SftRecord> selected;  // input order
  CurationCounts counts;
};

CurationResult curate_sft(std::vector<SftRecord> records, gateway::Gateway& gw, const CurationOptions& options);

}  // namespace mtforge::sft
