#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mtforge::gateway {

// Wire-level failure. Retryable failures (timeouts, refused connections, 5xx,
// 429) are retried by the gateway; the rest fail the call immediately.
class TransportError : public std::runtime_error {
 public:
  TransportError(std::string what, bool retryable)
      : std::runtime_error(std::move(what)), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

struct TransportOptions {
  std::chrono::milliseconds timeout{60'000};
  std::string bearer_token;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Both return the raw response body.
  virtual std::string post(std::string_view path, const std::string& body,
                           const TransportOptions& options) = 0;
  virtual std::string get(std::string_view path, const TransportOptions& options) = 0;
};

// JSON-over-HTTP via cpp-httplib. `base_url` is scheme://host[:port][/prefix].
std::shared_ptr<Transport> make_http_transport(std::string base_url);

// In-process transport routing every request to a handler. Backs the mock
// endpoints used by tests and by --offline runs.
class FunctionTransport : public Transport {
 public:
  // path, body ("" for GET) -> response body
  using Handler = std::function<std::string(std::string_view path, const std::string& body)>;

  explicit FunctionTransport(Handler handler) : handler_(std::move(handler)) {}

  std::string post(std::string_view path, const std::string& body, const TransportOptions&) override {
    return handler_(path, body);
  }
  std::string get(std::string_view path, const TransportOptions&) override {
    return handler_(path, "");
  }

 private:
  Handler handler_;
};

}  // namespace mtforge::gateway
