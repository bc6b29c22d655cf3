#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "mtforge/core/error.hpp"
#include "mtforge/gateway/gateway.hpp"
#include "mtforge/gateway/mock.hpp"

namespace mtforge::gateway {
namespace {

EndpointConfig config(std::string id, int max_retries = 2) {
  EndpointConfig c;
  c.endpoint_id = std::move(id);
  c.max_retries = max_retries;
  c.requests_per_minute = 1000;
  return c;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

GenerationRequest request(std::string endpoint, std::string prompt, int n = 1, double temperature = 0.0) {
  GenerationRequest r;
  r.endpoint_id = std::move(endpoint);
  r.prompt_messages = {{"user", std::move(prompt)}};
  r.num_samples = n;
  r.temperature = temperature;
  return r;
}

Conversation convo() { return Conversation({{Role::User, "hello"}}, "test"); }

TEST(Generate, MockTableEcho) {
  Gateway gw(std::make_shared<SimulatedClock>());
  gw.register_endpoint(config("gen"), mock::table_generator({{"ping", "pong"}}));
  EXPECT_EQ(gw.generate(request("gen", "ping")), std::vector<std::string>{"pong"});
}

TEST(Generate, ReturnsRequestedSampleCount) {
  Gateway gw(std::make_shared<SimulatedClock>());
  gw.register_endpoint(config("gen"), mock::generator([](const auto&, double, int n, auto) {
                         std::vector<std::string> out;
                         for (int i = 0; i < n; ++i) out.push_back("cand" + std::to_string(i));
                         return out;
                       }));
  EXPECT_EQ(gw.generate(request("gen", "translate", 24, 1.0)).size(), 24u);
}

TEST(Generate, UnregisteredEndpoint) {
  Gateway gw(std::make_shared<SimulatedClock>());
  EXPECT_EQ(code_of([&] { gw.generate(request("nope", "x")); }), ErrorCode::EndpointUnavailable);
}

TEST(Generate, WrongChoiceCountIsMalformed) {
  Gateway gw(std::make_shared<SimulatedClock>());
  gw.register_endpoint(config("gen"), mock::generator([](const auto&, double, int, auto) {
                         return std::vector<std::string>{"only one"};
                       }));
  EXPECT_EQ(code_of([&] { gw.generate(request("gen", "x", 3)); }), ErrorCode::MalformedResponse);
}

TEST(Generate, PayloadWithoutChoicesIsMalformed) {
  Gateway gw(std::make_shared<SimulatedClock>());
  gw.register_endpoint(config("gen"), std::make_shared<FunctionTransport>(
                                          [](std::string_view, const std::string&) { return R"({"x":1})"; }));
  EXPECT_EQ(code_of([&] { gw.generate(request("gen", "x")); }), ErrorCode::MalformedResponse);
  gw.register_endpoint(config("gen2"), std::make_shared<FunctionTransport>(
                                           [](std::string_view, const std::string&) { return "not json"; }));
  EXPECT_EQ(code_of([&] { gw.generate(request("gen2", "x")); }), ErrorCode::MalformedResponse);
}

TEST(Generate, SampledResponsesAreNotCachedWithoutSeed) {
  Gateway gw(std::make_shared<SimulatedClock>());
  auto counter = std::make_shared<mock::CountingTransport>(mock::text_generator([](auto&) { return "y"; }));
  gw.register_endpoint(config("gen"), counter);
  gw.generate(request("gen", "x", 2, 1.0));
  gw.generate(request("gen", "x", 2, 1.0));
  EXPECT_EQ(counter->calls(), 2);
  auto seeded = request("gen", "x", 2, 1.0);
  seeded.seed = 5;
  gw.generate(seeded);
  gw.generate(seeded);
  EXPECT_EQ(counter->calls(), 3);
  gw.generate(request("gen", "x", 1, 0.0));
  gw.generate(request("gen", "x", 1, 0.0));
  EXPECT_EQ(counter->calls(), 4);
  EXPECT_EQ(gw.stats("gen").cache_hits, 2u);
}

TEST(ScoreQuality, PassesValueAndDirectionThrough) {
  Gateway gw(std::make_shared<SimulatedClock>());
  gw.register_endpoint(config("kiwi"), mock::metric("cometkiwi", Direction::HigherBetter,
                                                    [](auto&, auto&, auto&) { return 0.85; }));
  gw.register_endpoint(config("mx"), mock::metric("metricx", Direction::LowerBetter,
                                                  [](auto&, auto&, auto&) { return -4.0; }));
  const auto s = gw.score_quality("kiwi", {"src", "tgt", std::nullopt, ""});
  EXPECT_EQ(s, (MetricScore{"cometkiwi", 0.85, Direction::HigherBetter}));
  const auto m = gw.score_quality("mx", {"src", "tgt", std::nullopt, "metricx"});
  EXPECT_EQ(m.direction, Direction::LowerBetter);
  EXPECT_EQ(m.value, -4.0);
}

TEST(ScoreQuality, ReferenceIsForwarded) {
  Gateway gw(std::make_shared<SimulatedClock>());
  gw.register_endpoint(config("comet"),
                       mock::metric("comet22", Direction::HigherBetter,
                                    [](auto&, const std::string& hyp, const std::optional<std::string>& ref) {
                                      return ref && *ref == hyp ? 1.0 : 0.0;
                                    }));
  EXPECT_EQ(gw.score_quality("comet", {"s", "a", std::string("a"), ""}).value, 1.0);
  EXPECT_EQ(gw.score_quality("comet", {"s", "a", std::string("b"), ""}).value, 0.0);
}

TEST(ScoreQuality, Errors) {
  Gateway gw(std::make_shared<SimulatedClock>());
  gw.register_endpoint(config("kiwi"), mock::metric("cometkiwi", Direction::HigherBetter,
                                                    [](auto&, auto&, auto&) { return 0.5; }));
  EXPECT_EQ(code_of([&] { gw.score_quality("kiwi", {"src", "", std::nullopt, ""}); }),
            ErrorCode::PreconditionViolation);
  EXPECT_EQ(code_of([&] { gw.score_quality("kiwi", {"src", "t", std::nullopt, "comet22"}); }),
            ErrorCode::MetricMismatch);
  // A generator does not declare a direction.
  gw.register_endpoint(config("gen"), mock::text_generator([](auto&) { return "x"; }));
  EXPECT_EQ(code_of([&] { gw.score_quality("gen", {"s", "t", std::nullopt, ""}); }),
            ErrorCode::MalformedResponse);
}

TEST(ScoreReward, FixtureAndCacheIdempotence) {
  Gateway gw(std::make_shared<SimulatedClock>());
  auto counter = std::make_shared<mock::CountingTransport>(
      mock::reward([](const Json&, const std::string& answer) { return answer == "good" ? 0.9 : 0.1; }));
  gw.register_endpoint(config("rm"), counter);
  EXPECT_EQ(gw.score_reward("rm", convo(), "good"), 0.9);
  EXPECT_EQ(gw.score_reward("rm", convo(), "good"), 0.9);
  EXPECT_EQ(counter->calls(), 1);
  EXPECT_EQ(gw.score_reward("rm", convo(), "bad"), 0.1);
  EXPECT_EQ(counter->calls(), 2);
}

TEST(Retry, TimeoutWithTwoRetriesMakesThreeAttempts) {
  auto clock = std::make_shared<SimulatedClock>();
  Gateway gw(clock);
  auto counter = std::make_shared<mock::CountingTransport>(mock::reward([](auto&, auto&) { return 0.0; }));
  counter->fail_always();
  gw.register_endpoint(config("rm", 2), counter);
  EXPECT_EQ(code_of([&] { gw.score_reward("rm", convo(), "x"); }), ErrorCode::EndpointUnavailable);
  EXPECT_EQ(counter->calls(), 3);
  EXPECT_EQ(gw.stats("rm").wire_calls, 3u);
  // Backoff went through the clock: 500 ms + 1000 ms.
  EXPECT_EQ(clock->now().time_since_epoch(), std::chrono::milliseconds(1500));
}

TEST(Retry, AttemptsNeverExceedMaxRetriesPlusOne) {
  for (int max_retries = 0; max_retries <= 4; ++max_retries) {
    for (int failures = 0; failures <= 6; ++failures) {
      Gateway gw(std::make_shared<SimulatedClock>());
      auto counter =
          std::make_shared<mock::CountingTransport>(mock::reward([](auto&, auto&) { return 1.0; }), failures);
      gw.register_endpoint(config("rm", max_retries), counter);
      const bool should_succeed = failures <= max_retries;
      if (should_succeed) {
        EXPECT_EQ(gw.score_reward("rm", convo(), "x"), 1.0);
        EXPECT_EQ(counter->calls(), failures + 1);
      } else {
        EXPECT_THROW(gw.score_reward("rm", convo(), "x"), Error);
        EXPECT_EQ(counter->calls(), max_retries + 1);
      }
    }
  }
}

TEST(Retry, NonRetryableErrorsFailFast) {
  Gateway gw(std::make_shared<SimulatedClock>());
  auto counter = std::make_shared<mock::CountingTransport>(mock::table_generator({}));
  gw.register_endpoint(config("gen", 5), counter);
  EXPECT_EQ(code_of([&] { gw.generate(request("gen", "unknown")); }), ErrorCode::EndpointUnavailable);
  EXPECT_EQ(counter->calls(), 1);
}

TEST(Cache, DiskHitIsByteIdentical) {
  const auto dir = std::filesystem::temp_directory_path() / "mtforge_cache_test";
  std::filesystem::remove_all(dir);
  const std::string payload = R"({"choices": [ {"text": "über  spaced"} ], "extra": 1.50})";
  auto cfg = config("gen");
  cfg.cache_dir = dir;
  {
    Gateway gw(std::make_shared<SimulatedClock>());
    gw.register_endpoint(cfg, std::make_shared<FunctionTransport>(
                                  [&](std::string_view, const std::string&) { return payload; }));
    EXPECT_EQ(gw.generate(request("gen", "x")).front(), "über  spaced");
  }
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    ++files;
    std::ifstream in(entry.path(), std::ios::binary);
    const std::string stored((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(stored, payload);
    EXPECT_EQ(entry.path().filename().string().size(), 64u);  // sha-256 hex
  }
  EXPECT_EQ(files, 1u);
  // A fresh gateway answers from disk without touching the wire.
  Gateway gw(std::make_shared<SimulatedClock>());
  auto counter = std::make_shared<mock::CountingTransport>(mock::table_generator({}));
  gw.register_endpoint(cfg, counter);
  EXPECT_EQ(gw.generate(request("gen", "x")).front(), "über  spaced");
  EXPECT_EQ(counter->calls(), 0);
  std::filesystem::remove_all(dir);
}

TEST(RateLimiter, NeverExceedsBudgetInAnyWindow) {
  auto clock = std::make_shared<SimulatedClock>();
  Gateway gw(clock);
  auto cfg = config("rm");
  cfg.requests_per_minute = 5;
  cfg.cache_enabled = false;
  std::vector<Clock::TimePoint> stamps;
  gw.register_endpoint(cfg, std::make_shared<FunctionTransport>([&](std::string_view, const std::string&) {
                         stamps.push_back(clock->now());
                         return std::string(R"({"reward": 1})");
                       }));
  for (int i = 0; i < 23; ++i) {
    gw.score_reward("rm", convo(), "x");
    clock->advance(std::chrono::seconds(1));
  }
  ASSERT_EQ(stamps.size(), 23u);
  for (std::size_t i = 0; i < stamps.size(); ++i) {
    int in_window = 0;
    for (std::size_t j = i; j < stamps.size() && stamps[j] - stamps[i] < std::chrono::seconds(60); ++j) {
      ++in_window;
    }
    EXPECT_LE(in_window, 5) << "window starting at call " << i;
  }
  // 23 calls at 5/min need at least four full windows.
  EXPECT_GE(stamps.back() - stamps.front(), std::chrono::seconds(240));
}

TEST(Gateway, ConcurrentCallersShareOneInstance) {
  Gateway gw;
  auto cfg = config("rm");
  cfg.max_concurrency = 3;
  std::atomic<int> in_flight{0}, peak{0};
  gw.register_endpoint(cfg, std::make_shared<FunctionTransport>([&](std::string_view, const std::string& body) {
                         const int now = ++in_flight;
                         int p = peak.load();
                         while (now > p && !peak.compare_exchange_weak(p, now)) {}
                         std::this_thread::sleep_for(std::chrono::milliseconds(2));
                         --in_flight;
                         return Json{{"reward", static_cast<double>(body.size())}}.dump();
                       }));
  std::vector<std::jthread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 10; ++i) gw.score_reward("rm", convo(), std::to_string(t * 100 + i));
    });
  }
  threads.clear();
  EXPECT_LE(peak.load(), 3);
  EXPECT_EQ(gw.stats("rm").wire_calls, 80u);
}

TEST(HttpTransport, SpeaksWireProtocolOverLoopback) {
  httplib::Server server;
  std::string seen_auth;
  server.Get("/v1/info", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"kind":"metric","metric_id":"kiwi","direction":"higher_better","version":"7"})",
                    "application/json");
  });
  server.Post("/v1/score", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    const auto body = Json::parse(req.body);
    res.set_content(Json{{"metric_id", "kiwi"}, {"value", body["translation"] == "good" ? 0.9 : 0.2}}.dump(),
                    "application/json");
  });
  server.Post("/v1/generate", [](const httplib::Request&, httplib::Response& res) { res.status = 503; });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::jthread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("MTFORGE_TEST_TOKEN", "sekret", 1);
  Gateway gw(std::make_shared<SimulatedClock>());
  auto cfg = config("kiwi", 1);
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  cfg.auth_token_env_var = "MTFORGE_TEST_TOKEN";
  gw.register_endpoint(cfg, make_http_transport(cfg.base_url));

  EXPECT_EQ(gw.info("kiwi").version, "7");
  EXPECT_EQ(gw.score_quality("kiwi", {"s", "good", std::nullopt, ""}).value, 0.9);
  EXPECT_EQ(seen_auth, "Bearer sekret");
  EXPECT_EQ(code_of([&] { gw.generate(request("kiwi", "x")); }), ErrorCode::EndpointUnavailable);
  EXPECT_EQ(gw.stats("kiwi").wire_calls, 4u);  // info + score + 2 attempts at 503
  server.stop();
}

}  // namespace
}  // namespace mtforge::gateway
