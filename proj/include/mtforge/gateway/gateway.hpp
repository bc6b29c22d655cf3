#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <vector>

#include "mtforge/core/json.hpp"
#include "mtforge/core/types.hpp"
#include "mtforge/gateway/cache.hpp"
#include "mtforge/gateway/clock.hpp"
#include "mtforge/gateway/rate_limiter.hpp"
#include "mtforge/gateway/transport.hpp"
#include "mtforge/gateway/types.hpp"

namespace mtforge::gateway {

// Uniform client for generation, judging (generation with a judge prompt),
// reward scoring and quality metrics. Thread-safe; share one instance.
//
// Wire protocol, all JSON:
//   POST /generate {"messages":[{"role","content"}],"temperature","n","max_tokens"[,"seed"]}
//                  -> {"choices":[{"text"}]}
//   POST /score    {"metric_id","source","translation"[,"reference"]} -> {"metric_id","value"}
//   POST /reward   {"messages":[...],"answer"} -> {"reward"}
//   GET  /info     -> {"endpoint_id","kind","metric_id","direction","version"}
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Clock> clock = system_clock());
  ~Gateway();

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  void register_endpoint(EndpointConfig config, std::shared_ptr<Transport> transport);
  bool has_endpoint(const std::string& endpoint_id) const;
  std::vector<std::string> endpoint_ids() const;

  // Returns exactly req.num_samples completions.
  std::vector<std::string> generate(const GenerationRequest& req);

  // Single user message at temperature 0; the shape every judge call takes.
  std::string complete(const std::string& endpoint_id, const std::string& prompt);

  // The score carries the direction the endpoint declared in /info.
  MetricScore score_quality(const std::string& endpoint_id, const QualityRequest& req);

  // Higher is better by contract.
  double score_reward(const std::string& endpoint_id, const Conversation& conversation,
                      std::string_view answer);

  // Cached after the first successful handshake.
  EndpointInfo info(const std::string& endpoint_id);

  EndpointStats stats(const std::string& endpoint_id) const;

 private:
  struct Endpoint;

  Endpoint& endpoint(const std::string& endpoint_id) const;
  // Runs one logical request through cache, rate limit, concurrency bound and
  // retries. Returns the raw response body.
  std::string call(Endpoint& ep, std::string_view path, const std::string& body, bool cacheable);

  std::shared_ptr<Clock> clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::unique_ptr<Endpoint>> endpoints_;
};

}  // namespace mtforge::gateway
