#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mtforge/core/types.hpp"

namespace mtforge::gateway {

struct Message {
  std::string role;  // "system", "user" or "assistant"
  std::string content;
};

struct GenerationRequest {
  std::vector<Message> prompt_messages;
  double temperature = 0.0;
  int num_samples = 1;
  int max_tokens = 1024;
  std::string endpoint_id;
  // Sampled (temperature > 0) responses are cached only when a seed is set.
  std::optional<std::uint64_t> seed;
};

struct EndpointConfig {
  std::string endpoint_id;
  std::string base_url;
  // Name of the environment variable holding the bearer token; empty for none.
  std::string auth_token_env_var;
  std::chrono::milliseconds timeout{60'000};
  int max_retries = 2;
  int requests_per_minute = 60;
  std::optional<std::filesystem::path> cache_dir;
  bool cache_enabled = true;
  int max_concurrency = 4;
  std::chrono::milliseconds retry_backoff{500};
};

struct QualityRequest {
  std::string source_text;
  std::string translation_text;
  std::optional<std::string> reference_text;
  // Expected metric; empty accepts whatever the endpoint declares.
  std::string metric_id;
};

// Result of the GET /info handshake.
struct EndpointInfo {
  std::string endpoint_id;
  std::string kind;  // "generator", "metric" or "reward"
  std::optional<std::string> metric_id;
  std::optional<Direction> direction;
  std::string version;
};

struct EndpointStats {
  std::uint64_t requests = 0;     // logical calls into the gateway
  std::uint64_t wire_calls = 0;   // transport attempts, retries included
  std::uint64_t cache_hits = 0;
  std::uint64_t failures = 0;     // calls that ended in an error
};

}  // namespace mtforge::gateway
