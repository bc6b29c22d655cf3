#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtforge/core/types.hpp"
#include "mtforge/gateway/gateway.hpp"
#include "mtforge/guideline/sample.hpp"
#include "mtforge/guideline/verify.hpp"

namespace mtforge::guideline {

struct VerifiableEndpoints {
  std::string generator;   // writes source + guidelines
  std::string judge;       // source verification
  std::string translator;  // plain translation of the source
  std::string editor;      // applies the guidelines to the translation
  std::string quality;     // reference-free metric
};

struct VerifiableRunOptions {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  double quality_gate = kDefaultQualityGate;
  double generation_temperature = 0.7;
  LanguageTag source_language{"en", "English"};
  std::vector<LanguageTag> target_languages;  // one drawn per sample
  std::size_t concurrency = 4;
  BundleOptions bundle;
  // Unparseable generator or judge output: false drops or rejects the sample
  // with a reason, true aborts the run.
  bool strict = false;
};

struct VerifiableRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::optional<VerifiableSample> sample;  // absent when generation could not be parsed
  std::optional<LanguageTag> source_language;
  std::optional<LanguageTag> target_language;
  std::string drop_reason;

  Json to_json() const;
};

struct VerifiableCounts {
  std::size_t bundles = 0;
  std::size_t generated = 0;
  std::size_t source_verified = 0;
  std::size_t translated = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::map<std::string, std::size_t> reasons;  // rejection and drop reasons

  Json to_json() const;
};

VerifiableCounts count_records(std::span<const VerifiableRecord> records);

// Processes one seeded bundle through every stage. Deterministic in
// (catalog, topics, endpoints' behaviour, seed).
VerifiableRecord process_verifiable(const Catalog& catalog, std::span<const TopicPair> topics,
                                    gateway::Gateway& gw, const VerifiableEndpoints& endpoints,
                                    const VerifiableRunOptions& options, std::uint64_t index);

// Sample i uses seed mix_seed(options.seed, i). Records come back in index order.
std::vector<VerifiableRecord> run_verifiable(const Catalog& catalog, std::span<const TopicPair> topics,
                                             gateway::Gateway& gw, const VerifiableEndpoints& endpoints,
                                             const VerifiableRunOptions& options);

}  // namespace mtforge::guideline
