#include "mtforge/gateway/gateway.hpp"

#include <cstdlib>

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::gateway {

struct Gateway::Endpoint {
  Endpoint(EndpointConfig cfg, std::shared_ptr<Transport> t, std::shared_ptr<Clock> clock)
      : config(std::move(cfg)),
        transport(std::move(t)),
        limiter(config.requests_per_minute, std::move(clock)),
        cache(config.cache_dir),
        in_flight(config.max_concurrency) {}

  EndpointConfig config;
  std::shared_ptr<Transport> transport;
  RateLimiter limiter;
  ResponseCache cache;
  std::counting_semaphore<1024> in_flight;
  std::mutex mu;
  EndpointStats stats;
  std::optional<EndpointInfo> info;
};

namespace {

TransportOptions options_for(const EndpointConfig& cfg) {
  TransportOptions opts;
  opts.timeout = cfg.timeout;
  if (!cfg.auth_token_env_var.empty()) {
    if (const char* token = std::getenv(cfg.auth_token_env_var.c_str())) opts.bearer_token = token;
  }
  return opts;
}

Json parse_payload(const std::string& body, const std::string& endpoint_id) {
  Json j = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    fail(ErrorCode::MalformedResponse, endpoint_id + ": response is not a JSON object");
  }
  return j;
}

Json messages_json(const std::vector<Message>& messages) {
  Json arr = Json::array();
  for (const Message& m : messages) arr.push_back({{"role", m.role}, {"content", m.content}});
  return arr;
}

}  // namespace

Gateway::Gateway(std::shared_ptr<Clock> clock) : clock_(std::move(clock)) {}

Gateway::~Gateway() = default;

void Gateway::register_endpoint(EndpointConfig config, std::shared_ptr<Transport> transport) {
  require(!config.endpoint_id.empty(), ErrorCode::InvalidArgument, "endpoint_id is empty");
  require(config.max_retries >= 0, ErrorCode::InvalidArgument, "max_retries must be >= 0");
  require(config.requests_per_minute >= 1, ErrorCode::InvalidArgument,
          "requests_per_minute must be >= 1");
  require(config.max_concurrency >= 1 && config.max_concurrency <= 1024, ErrorCode::InvalidArgument,
          "max_concurrency must be in [1, 1024]");
  require(transport != nullptr, ErrorCode::InvalidArgument, "transport is null");
  const std::string id = config.endpoint_id;
  auto ep = std::make_unique<Endpoint>(std::move(config), std::move(transport), clock_);
  std::lock_guard lock(mu_);
  endpoints_[id] = std::move(ep);
}

bool Gateway::has_endpoint(const std::string& endpoint_id) const {
  std::lock_guard lock(mu_);
  return endpoints_.contains(endpoint_id);
}

std::vector<std::string> Gateway::endpoint_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, ep] : endpoints_) ids.push_back(id);
  return ids;
}

Gateway::Endpoint& Gateway::endpoint(const std::string& endpoint_id) const {
  std::lock_guard lock(mu_);
  const auto it = endpoints_.find(endpoint_id);
  if (it == endpoints_.end()) {
    fail(ErrorCode::EndpointUnavailable, "endpoint '" + endpoint_id + "' is not registered");
  }
  return *it->second;
}

EndpointStats Gateway::stats(const std::string& endpoint_id) const {
  Endpoint& ep = endpoint(endpoint_id);
  std::lock_guard lock(ep.mu);
  return ep.stats;
}

std::string Gateway::call(Endpoint& ep, std::string_view path, const std::string& body,
                          bool cacheable) {
  {
    std::lock_guard lock(ep.mu);
    ++ep.stats.requests;
  }
  cacheable = cacheable && ep.config.cache_enabled;
  std::string key;
  if (cacheable) {
    const Json canonical{{"endpoint_id", ep.config.endpoint_id},
                         {"path", std::string(path)},
                         {"body", Json::parse(body)}};
    key = sha256_hex(canonical.dump());
    if (auto hit = ep.cache.get(key)) {
      std::lock_guard lock(ep.mu);
      ++ep.stats.cache_hits;
      return *hit;
    }
  }

  const TransportOptions opts = options_for(ep.config);
  std::string last_error;
  const int attempts = ep.config.max_retries + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    ep.limiter.acquire();
    {
      std::lock_guard lock(ep.mu);
      ++ep.stats.wire_calls;
    }
    try {
      ep.in_flight.acquire();
      struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
      } release{ep.in_flight};
      std::string response = body.empty() ? ep.transport->get(path, opts)
                                          : ep.transport->post(path, body, opts);
      if (cacheable) ep.cache.put(key, response);
      return response;
    } catch (const TransportError& e) {
      last_error = e.what();
      if (!e.retryable()) break;
      if (attempt + 1 < attempts) {
        clock_->sleep_for(ep.config.retry_backoff * (1LL << std::min(attempt, 16)));
      }
    }
  }
  {
    std::lock_guard lock(ep.mu);
    ++ep.stats.failures;
  }
  fail(ErrorCode::EndpointUnavailable, ep.config.endpoint_id + ": " + last_error);
}

std::vector<std::string> Gateway::generate(const GenerationRequest& req) {
  require(req.num_samples >= 1, ErrorCode::InvalidArgument, "num_samples must be >= 1");
  require(req.temperature >= 0.0, ErrorCode::InvalidArgument, "temperature must be >= 0");
  require(req.max_tokens >= 1, ErrorCode::InvalidArgument, "max_tokens must be >= 1");
  Endpoint& ep = endpoint(req.endpoint_id);

  Json body{{"messages", messages_json(req.prompt_messages)},
            {"temperature", req.temperature},
            {"n", req.num_samples},
            {"max_tokens", req.max_tokens}};
  if (req.seed) body["seed"] = *req.seed;
  const bool cacheable = req.temperature == 0.0 || req.seed.has_value();

  const Json resp = parse_payload(call(ep, "/generate", body.dump(), cacheable), req.endpoint_id);
  const auto choices = resp.find("choices");
  if (choices == resp.end() || !choices->is_array()) {
    fail(ErrorCode::MalformedResponse, req.endpoint_id + ": response lacks 'choices'");
  }
  std::vector<std::string> out;
  for (const Json& c : *choices) {
    const auto text = c.is_object() ? c.find("text") : c.end();
    if (!c.is_object() || text == c.end() || !text->is_string()) {
      fail(ErrorCode::MalformedResponse, req.endpoint_id + ": choice without 'text'");
    }
    out.push_back(text->get<std::string>());
  }
  if (static_cast<int>(out.size()) != req.num_samples) {
    fail(ErrorCode::MalformedResponse, req.endpoint_id + ": expected " +
                                           std::to_string(req.num_samples) + " choices, got " +
                                           std::to_string(out.size()));
  }
  return out;
}

std::string Gateway::complete(const std::string& endpoint_id, const std::string& prompt) {
  GenerationRequest req;
  req.endpoint_id = endpoint_id;
  req.prompt_messages = {{"user", prompt}};
  req.temperature = 0.0;
  return generate(req).front();
}

EndpointInfo Gateway::info(const std::string& endpoint_id) {
  Endpoint& ep = endpoint(endpoint_id);
  {
    std::lock_guard lock(ep.mu);
    if (ep.info) return *ep.info;
  }
  const Json j = parse_payload(call(ep, "/info", "", false), endpoint_id);
  EndpointInfo info;
  info.endpoint_id = j.value("endpoint_id", endpoint_id);
  info.kind = j.value("kind", "");
  info.version = j.value("version", "");
  if (const auto it = j.find("metric_id"); it != j.end() && it->is_string()) {
    info.metric_id = it->get<std::string>();
  }
  if (const auto it = j.find("direction"); it != j.end() && it->is_string()) {
    try {
      info.direction = parse_direction(it->get<std::string>());
    } catch (const Error&) {
      fail(ErrorCode::MalformedResponse, endpoint_id + ": unknown direction in /info");
    }
  }
  std::lock_guard lock(ep.mu);
  ep.info = info;
  return info;
}

MetricScore Gateway::score_quality(const std::string& endpoint_id, const QualityRequest& req) {
  require(!req.source_text.empty(), ErrorCode::PreconditionViolation, "source text is empty");
  require(!req.translation_text.empty(), ErrorCode::PreconditionViolation,
          "translation text is empty");
  Endpoint& ep = endpoint(endpoint_id);
  const EndpointInfo declared = info(endpoint_id);
  if (!declared.direction || !declared.metric_id) {
    fail(ErrorCode::MalformedResponse, endpoint_id + ": /info does not declare metric_id and direction");
  }
  const std::string metric_id = req.metric_id.empty() ? *declared.metric_id : req.metric_id;

  Json body{{"metric_id", metric_id}, {"source", req.source_text}, {"translation", req.translation_text}};
  if (req.reference_text) body["reference"] = *req.reference_text;

  const Json resp = parse_payload(call(ep, "/score", body.dump(), true), endpoint_id);
  const auto value = resp.find("value");
  if (value == resp.end() || !value->is_number()) {
    fail(ErrorCode::MalformedResponse, endpoint_id + ": response lacks numeric 'value'");
  }
  const std::string returned = resp.value("metric_id", *declared.metric_id);
  if (returned != metric_id) {
    fail(ErrorCode::MetricMismatch, endpoint_id + ": asked for '" + metric_id + "', got '" + returned + "'");
  }
  return MetricScore{metric_id, value->get<double>(), *declared.direction};
}

double Gateway::score_reward(const std::string& endpoint_id, const Conversation& conversation,
                             std::string_view answer) {
  Endpoint& ep = endpoint(endpoint_id);
  Json messages = Json::array();
  for (const Turn& t : conversation.turns()) {
    messages.push_back({{"role", std::string(to_string(t.role))}, {"content", t.text}});
  }
  const Json body{{"messages", messages}, {"answer", std::string(answer)}};
  const Json resp = parse_payload(call(ep, "/reward", body.dump(), true), endpoint_id);
  const auto reward = resp.find("reward");
  if (reward == resp.end() || !reward->is_number()) {
    fail(ErrorCode::MalformedResponse, endpoint_id + ": response lacks numeric 'reward'");
  }
  return reward->get<double>();
}

}  // namespace mtforge::gateway
