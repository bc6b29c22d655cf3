#include <httplib.h>

#include "mtforge/core/error.hpp"
#include "mtforge/gateway/transport.hpp"

namespace mtforge::gateway {

namespace {

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::string base_url) {
    const auto scheme_end = base_url.find("://");
    const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = base_url.find('/', host_start);
    origin_ = base_url.substr(0, path_start);
    if (path_start != std::string::npos) prefix_ = base_url.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    require(!origin_.empty(), ErrorCode::ConfigInvalid, "empty base_url");
  }

  std::string post(std::string_view path, const std::string& body,
                   const TransportOptions& options) override {
    auto client = make_client(options);
    auto res = client.Post(prefix_ + std::string(path), headers(options), body, "application/json");
    return unwrap(res, path);
  }

  std::string get(std::string_view path, const TransportOptions& options) override {
    auto client = make_client(options);
    auto res = client.Get(prefix_ + std::string(path), headers(options));
    return unwrap(res, path);
  }

 private:
  httplib::Client make_client(const TransportOptions& options) const {
    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    return client;
  }

  static httplib::Headers headers(const TransportOptions& options) {
    httplib::Headers h;
    if (!options.bearer_token.empty()) h.emplace("Authorization", "Bearer " + options.bearer_token);
    return h;
  }

  std::string unwrap(const httplib::Result& res, std::string_view path) const {
    if (!res) {
      throw TransportError(origin_ + std::string(path) + ": " + httplib::to_string(res.error()),
                           /*retryable=*/true);
    }
    if (res->status >= 200 && res->status < 300) return res->body;
    const bool retryable = res->status == 429 || res->status >= 500;
    throw TransportError(origin_ + std::string(path) + ": HTTP " + std::to_string(res->status),
                         retryable);
  }

  std::string origin_;
  std::string prefix_;
};

}  // namespace

std::shared_ptr<Transport> make_http_transport(std::string base_url) {
  return std::make_shared<HttpTransport>(std::move(base_url));
}

}  // namespace mtforge::gateway
