#include "mtforge/gateway/mock.hpp"

#include "mtforge/core/error.hpp"

namespace mtforge::gateway::mock {

namespace {

std::vector<Message> parse_messages(const Json& arr) {
  std::vector<Message> out;
  for (const Json& m : arr) out.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
  return out;
}

}  // namespace

std::string last_user_content(const std::vector<Message>& messages) {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->role == "user") return it->content;
  }
  return messages.empty() ? std::string() : messages.back().content;
}

std::shared_ptr<Transport> generator(GenerateFn fn, std::string version) {
  return std::make_shared<FunctionTransport>(
      [fn = std::move(fn), version = std::move(version)](std::string_view path, const std::string& body) {
        if (path == "/info") {
          return Json{{"kind", "generator"}, {"version", version}}.dump();
        }
        if (path != "/generate") throw TransportError("HTTP 404", false);
        const Json req = Json::parse(body);
        std::optional<std::uint64_t> seed;
        if (req.contains("seed")) seed = req["seed"].get<std::uint64_t>();
        const auto texts = fn(parse_messages(req.at("messages")), req.at("temperature").get<double>(),
                              req.at("n").get<int>(), seed);
        Json choices = Json::array();
        for (const auto& t : texts) choices.push_back({{"text", t}});
        return Json{{"choices", choices}}.dump();
      });
}

std::shared_ptr<Transport> table_generator(std::map<std::string, std::string> replies) {
  return generator([replies = std::move(replies)](const std::vector<Message>& messages, double, int n,
                                                  std::optional<std::uint64_t>) {
    const auto it = replies.find(last_user_content(messages));
    if (it == replies.end()) throw TransportError("HTTP 404: no fixture for prompt", false);
    return std::vector<std::string>(static_cast<std::size_t>(n), it->second);
  });
}

std::shared_ptr<Transport> text_generator(std::function<std::string(const std::string&)> fn) {
  return generator([fn = std::move(fn)](const std::vector<Message>& messages, double, int n,
                                        std::optional<std::uint64_t>) {
    return std::vector<std::string>(static_cast<std::size_t>(n), fn(last_user_content(messages)));
  });
}

std::shared_ptr<Transport> metric(std::string metric_id, Direction direction, MetricFn fn,
                                  std::string version) {
  return std::make_shared<FunctionTransport>(
      [metric_id = std::move(metric_id), direction, fn = std::move(fn), version = std::move(version)](
          std::string_view path, const std::string& body) {
        if (path == "/info") {
          return Json{{"kind", "metric"},
                      {"metric_id", metric_id},
                      {"direction", std::string(to_string(direction))},
                      {"version", version}}
              .dump();
        }
        if (path != "/score") throw TransportError("HTTP 404", false);
        const Json req = Json::parse(body);
        std::optional<std::string> reference;
        if (req.contains("reference")) reference = req["reference"].get<std::string>();
        const double value =
            fn(req.at("source").get<std::string>(), req.at("translation").get<std::string>(), reference);
        return Json{{"metric_id", metric_id}, {"value", value}}.dump();
      });
}

std::shared_ptr<Transport> reward(RewardFn fn, std::string version) {
  return std::make_shared<FunctionTransport>(
      [fn = std::move(fn), version = std::move(version)](std::string_view path, const std::string& body) {
        if (path == "/info") return Json{{"kind", "reward"}, {"version", version}}.dump();
        if (path != "/reward") throw TransportError("HTTP 404", false);
        const Json req = Json::parse(body);
        return Json{{"reward", fn(req.at("messages"), req.at("answer").get<std::string>())}}.dump();
      });
}

void CountingTransport::maybe_fail() {
  ++calls_;
  if (failures_left_.load() > 0) {
    --failures_left_;
    throw TransportError("timeout", true);
  }
}

std::string CountingTransport::post(std::string_view path, const std::string& body,
                                    const TransportOptions& o) {
  maybe_fail();
  return inner_->post(path, body, o);
}

std::string CountingTransport::get(std::string_view path, const TransportOptions& o) {
  maybe_fail();
  return inner_->get(path, o);
}

}  // namespace mtforge::gateway::mock
