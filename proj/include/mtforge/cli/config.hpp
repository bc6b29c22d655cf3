#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtforge/core/types.hpp"
#include "mtforge/eval/chrf.hpp"
#include "mtforge/eval/report.hpp"
#include "mtforge/gateway/types.hpp"

namespace mtforge::cli {

struct EndpointSpec {
  gateway::EndpointConfig config;
  std::string kind;  // generator | metric | reward
  std::string metric_id;  // metric endpoints
  Direction direction = Direction::HigherBetter;
};

struct CorpusPrepConfig {
  std::string quality_endpoint;  // empty: no gating
  std::optional<double> quality_threshold;
  std::string templates_dir;     // empty: the stock templates
  std::string template_id = "random";
  bool lenient = false;
  double tokens_per_word = 1.3;
  std::optional<std::int64_t> mixture_total_tokens;
  std::int64_t available_monolingual = 0;
  std::int64_t available_instruction = 0;
};

struct GenVerifiableConfig {
  std::string generator, judge, translator, editor, quality;
  std::size_t count = 20;
  double quality_gate = 0.8;
  double generation_temperature = 0.7;
  std::string source_language = "en";
  std::vector<std::string> target_languages;
  std::string catalog_dir;
  std::string topics;
  bool strict_bundle_size = false;
};

struct CurateSftConfig {
  std::string judge, reward;
  std::vector<std::string> teachers;
  std::string translation_judge;
  int keep_threshold = 4;
  std::vector<std::string> allowlist{"OpenHermes-2.5"};
};

struct BuildPrefsConfig {
  std::string mode = "mbr";  // mbr | post_edit | annotation | reward
  std::string generator, utility, check_metric, judge, reward;
  int num_samples = 24;
  double temperature = 1.0;
};

struct RewardBatchConfig {
  std::string mode = "strict";
  std::string samples;
  std::string host = "127.0.0.1";
  int port = 8090;
};

struct EvalConfig {
  eval::ChrfParams chrf;
  std::string layout = "per-language";
  std::string system = "system";
  std::vector<eval::LanguageGroup> language_groups;
  double tie_credit = 0.5;
};

struct IfMtConfig {
  std::string generator;
  double temperature = 0.7;
  bool strict_rule_count = false;
  std::string judge;
  std::string metric;  // optional translation-quality metric
};

struct Config {
  std::filesystem::path path;
  std::string digest;  // sha256 of the file bytes
  std::uint64_t seed = 0;
  std::size_t concurrency = 4;
  bool strict = false;
  std::map<std::string, EndpointSpec> endpoints;
  CorpusPrepConfig corpus_prep;
  GenVerifiableConfig gen_verifiable;
  CurateSftConfig curate_sft;
  BuildPrefsConfig build_prefs;
  RewardBatchConfig reward_batch;
  EvalConfig eval;
  IfMtConfig ifmt;
  std::string arena_judge;

  // Relative paths in the file resolve against the file's directory.
  std::filesystem::path resolve(const std::string& p) const;
  // ConfigInvalid unless `id` names a configured endpoint of the given kind
  // (any kind when empty). `what` names the setting in the message.
  const EndpointSpec& endpoint(const std::string& id, std::string_view kind, std::string_view what) const;
};

// ConfigInvalid on unreadable files, YAML errors, unknown keys or bad values.
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& yaml_text, const std::filesystem::path& origin = {});

// Commented default configuration written by `config init`.
std::string default_config_text(const std::filesystem::path& data_dir);

// Directory holding the shipped guideline catalog and topics.
std::filesystem::path default_data_dir();

}  // namespace mtforge::cli
