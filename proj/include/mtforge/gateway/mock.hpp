#pragma once

// Deterministic in-process endpoints speaking the gateway wire protocol.
// Tests use them directly; the CLI's --offline mode builds on them.

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mtforge/core/json.hpp"
#include "mtforge/gateway/transport.hpp"
#include "mtforge/gateway/types.hpp"

namespace mtforge::gateway::mock {

using GenerateFn = std::function<std::vector<std::string>(
    const std::vector<Message>& messages, double temperature, int n, std::optional<std::uint64_t> seed)>;
using MetricFn = std::function<double(const std::string& source, const std::string& translation,
                                      const std::optional<std::string>& reference)>;
using RewardFn = std::function<double(const Json& messages, const std::string& answer)>;

std::shared_ptr<Transport> generator(GenerateFn fn, std::string version = "mock-1");

// Single-completion generator answering from a prompt -> reply table. Prompts
// missing from the table produce a non-retryable HTTP 404.
std::shared_ptr<Transport> table_generator(std::map<std::string, std::string> replies);

// Convenience: every prompt maps through `fn` (n copies for n samples).
std::shared_ptr<Transport> text_generator(std::function<std::string(const std::string& prompt)> fn);

std::shared_ptr<Transport> metric(std::string metric_id, Direction direction, MetricFn fn,
                                  std::string version = "mock-1");

std::shared_ptr<Transport> reward(RewardFn fn, std::string version = "mock-1");

// Wraps a transport, counts calls, and can fail the first `failures` calls
// with a retryable timeout.
class CountingTransport : public Transport {
 public:
  explicit CountingTransport(std::shared_ptr<Transport> inner, int failures = 0)
      : inner_(std::move(inner)), failures_left_(failures) {}

  std::string post(std::string_view path, const std::string& body, const TransportOptions& o) override;
  std::string get(std::string_view path, const TransportOptions& o) override;

  int calls() const { return calls_.load(); }
  // Fail every call from now on.
  void fail_always() { failures_left_ = 1 << 30; }

 private:
  void maybe_fail();

  std::shared_ptr<Transport> inner_;
  std::atomic<int> failures_left_;
  std::atomic<int> calls_{0};
};

// Last user message of a wire request; what judges and generators key on.
std::string last_user_content(const std::vector<Message>& messages);

}  // namespace mtforge::gateway::mock
