#include <gtest/gtest.h>

#include <set>

#include "mtforge/core/error.hpp"
#include "mtforge/core/languages.hpp"
#include "mtforge/core/rng.hpp"
#include "mtforge/core/text.hpp"
#include "mtforge/corpus/mixture.hpp"
#include "mtforge/corpus/quality_gate.hpp"
#include "mtforge/corpus/templates.hpp"
#include "mtforge/gateway/mock.hpp"

namespace mtforge::corpus {
namespace {

ParallelPair pair(std::string src, std::string tgt, std::string provenance = "") {
  return {std::move(src), std::move(tgt), LanguageTag("fr", "French"), LanguageTag("en", "English"),
          std::move(provenance)};
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

std::string random_text(Rng& rng) {
  static const std::string kAlphabet = "abcdefgh XYZ.,'-\xC3\xA9";
  std::string s;
  const auto len = 1 + rng.index(20);
  for (std::uint64_t i = 0; i < len; ++i) s += kAlphabet[rng.index(kAlphabet.size())];
  return s;
}

TEST(Templates, RendersFirstStockTemplate) {
  const auto registry = TemplateRegistry::builtin();
  EXPECT_EQ(registry.render(pair("Bonjour", "Hello"), "translate_source_from"),
            "Source: Bonjour\nTranslate the source text from French to English.\nTarget: Hello");
  EXPECT_EQ(registry.ids().size(), 8u);
}

TEST(Templates, MissingSlotsAndUnknownIds) {
  TemplateRegistry r;
  EXPECT_EQ(code_of([&] { r.add("bare", "Translate this please."); }), ErrorCode::PlaceholderMissing);
  EXPECT_EQ(code_of([&] { r.add("half", "{{ source }} -> {{ target }}"); }), ErrorCode::PlaceholderMissing);
  EXPECT_EQ(code_of([&] { r.add("bad", "{{ source }} {{ target }} {{ lp0 }} {{ lp1 }} {{ foo }}"); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { r.add("open", "{{ source }} {{ target"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { TemplateRegistry::builtin().render(pair("a", "b"), "nope"); }),
            ErrorCode::UnknownTemplate);
  EXPECT_NO_THROW(r.add("tight", "{{source}}|{{target}}|{{lp0}}|{{lp1}}"));
  EXPECT_EQ(r.render(pair("a", "b"), "tight"), "a|b|French|English");
}

TEST(Templates, DirectoryMatchesBuiltins) {
  TemplateRegistry loaded;
  loaded.load_directory(std::string(MTFORGE_DATA_DIR) + "/templates");
  const auto builtin = TemplateRegistry::builtin();
  ASSERT_EQ(loaded.ids(), builtin.ids());
  for (const auto& id : builtin.ids()) EXPECT_EQ(loaded.text(id), builtin.text(id)) << id;
}

TEST(Templates, NoSlotSurvivesRendering) {
  Rng rng(3);
  const auto registry = TemplateRegistry::builtin();
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = pair(random_text(rng), random_text(rng));
    for (const auto& id : registry.ids()) {
      EXPECT_EQ(registry.render(p, id).find("{{"), std::string::npos);
    }
  }
}

TEST(Templates, RenderingIsInjectiveOverSourceAndTarget) {
  Rng rng(5);
  const auto registry = TemplateRegistry::builtin();
  for (const auto& id : registry.ids()) {
    std::set<std::pair<std::string, std::string>> inputs;
    std::set<std::string> outputs;
    for (int trial = 0; trial < 200; ++trial) {
      const auto p = pair(random_text(rng), random_text(rng));
      if (!inputs.insert({p.source, p.target}).second) continue;
      EXPECT_TRUE(outputs.insert(registry.render(p, id)).second) << id;
    }
  }
}

TEST(Templates, SubstitutedValuesAreNotReExpanded) {
  const auto out = TemplateRegistry::builtin().render(pair("{{ target }}", "T"), "translate_from");
  EXPECT_EQ(out, "Source: {{ target }}\nTranslate from French to English.\nTarget: T");
}

TEST(ParallelPair, JsonValidation) {
  const auto p = pair_from_json(Json::parse(R"({"source":"a","target":"b","lp0":"de","lp1":"en"})"));
  EXPECT_EQ(p.lp0.display_name(), "German");
  EXPECT_EQ(code_of([] { pair_from_json(Json::parse(R"({"source":"a","target":"b","lp0":"de","lp1":"de"})")); }),
            ErrorCode::DataError);
  EXPECT_EQ(code_of([] { pair_from_json(Json::parse(R"({"source":"","target":"b","lp0":"de","lp1":"en"})")); }),
            ErrorCode::DataError);
}

gateway::Gateway& gate_gateway(gateway::Gateway& gw, std::function<double(const std::string&)> score) {
  gateway::EndpointConfig cfg;
  cfg.endpoint_id = "kiwi";
  cfg.requests_per_minute = 1'000'000;
  gw.register_endpoint(cfg, gateway::mock::metric("cometkiwi", Direction::HigherBetter,
                                                  [score](const std::string& src, auto&, auto&) { return score(src); }));
  return gw;
}

TEST(QualityGate, ThresholdFilter) {
  gateway::Gateway gw(std::make_shared<gateway::SimulatedClock>());
  gate_gateway(gw, [](const std::string& src) { return src == "p1" ? 0.9 : 0.4; });
  const std::vector<ParallelPair> pairs = {pair("p1", "x"), pair("p2", "y")};
  const auto result = quality_gate(pairs, gw, {"kiwi", 0.8});
  ASSERT_EQ(result.kept.size(), 1u);
  EXPECT_EQ(result.kept[0].source, "p1");
  EXPECT_EQ(result.scores[0].value, 0.9);
  EXPECT_TRUE(quality_gate({}, gw, {"kiwi", 0.8}).kept.empty());
}

TEST(QualityGate, LowerBetterMetricKeepsSmallValues) {
  gateway::Gateway gw(std::make_shared<gateway::SimulatedClock>());
  gateway::EndpointConfig cfg;
  cfg.endpoint_id = "mx";
  gw.register_endpoint(cfg, gateway::mock::metric("metricx-qe", Direction::LowerBetter,
                                                  [](const std::string& src, auto&, auto&) { return src == "good" ? -2.0 : -8.0; }));
  const std::vector<ParallelPair> pairs = {pair("good", "x"), pair("bad", "y")};
  const auto result = quality_gate(pairs, gw, {"mx", -5.0});
  ASSERT_EQ(result.kept.size(), 1u);
  EXPECT_EQ(result.kept[0].source, "bad");
}

TEST(QualityGate, SeededReplayOracleOnThousandPairs) {
  // Mock scores are a pure function of the pair; replaying the function over
  // the same pairs gives the expected retained count.
  const auto score = [](const std::string& src) {
    return static_cast<double>(stable_hash(src, 99) % 1'000'001) / 1'000'000.0;
  };
  std::vector<ParallelPair> pairs;
  for (int i = 0; i < 1000; ++i) pairs.push_back(pair("src-" + std::to_string(i), "tgt"));
  std::vector<std::string> expected;
  for (const auto& p : pairs) {
    if (score(p.source) >= 0.8) expected.push_back(p.source);
  }

  gateway::Gateway gw;
  gate_gateway(gw, score);
  GateOptions opts{"kiwi", 0.8};
  opts.concurrency = 8;
  const auto result = quality_gate(pairs, gw, opts);
  std::vector<std::string> kept;
  for (const auto& p : result.kept) kept.push_back(p.source);
  EXPECT_EQ(kept, expected);  // same members, same order
  EXPECT_GT(expected.size(), 150u);
  EXPECT_LT(expected.size(), 250u);
}

TEST(QualityGate, LenientModeSkipsMalformedResponses) {
  gateway::Gateway gw(std::make_shared<gateway::SimulatedClock>());
  gateway::EndpointConfig cfg;
  cfg.endpoint_id = "kiwi";
  gw.register_endpoint(cfg, std::make_shared<gateway::FunctionTransport>(
                                [](std::string_view path, const std::string& body) -> std::string {
                                  if (path == "/info") return R"({"metric_id":"k","direction":"higher_better"})";
                                  if (body.find("broken") != std::string::npos) return R"({"metric_id":"k"})";
                                  return R"({"metric_id":"k","value":0.95})";
                                }));
  const std::vector<ParallelPair> pairs = {pair("ok", "x"), pair("broken", "y"), pair("ok2", "z")};
  EXPECT_EQ(code_of([&] { quality_gate(pairs, gw, {"kiwi", 0.5}); }), ErrorCode::MalformedResponse);
  GateOptions lenient{"kiwi", 0.5};
  lenient.lenient = true;
  const auto result = quality_gate(pairs, gw, lenient);
  EXPECT_EQ(result.kept.size(), 2u);
  ASSERT_EQ(result.skipped.size(), 1u);
  EXPECT_EQ(result.skipped[0].index, 1u);
}

TEST(QualityGate, EndpointUnavailablePropagates) {
  gateway::Gateway gw(std::make_shared<gateway::SimulatedClock>());
  GateOptions lenient{"missing", 0.5};
  lenient.lenient = true;
  const std::vector<ParallelPair> pairs = {pair("a", "b")};
  EXPECT_EQ(code_of([&] { quality_gate(pairs, gw, lenient); }), ErrorCode::EndpointUnavailable);
}

TEST(Mixture, StockSplit) {
  const BucketTokens plenty{1'000'000, 1'000'000, 1'000'000};
  EXPECT_EQ(plan_mixture({0.66, 0.33, 0.01}, plenty, 100), (BucketTokens{66, 33, 1}));
  EXPECT_EQ(plan_mixture({1, 0, 0}, plenty, 7), (BucketTokens{7, 0, 0}));
  EXPECT_EQ(plan_mixture({0.5, 0.5, 0}, plenty, 101), (BucketTokens{51, 50, 0}));
}

TEST(Mixture, RoundingRuleAgainstExhaustiveOracle) {
  // Oracle: exact rational arithmetic on weights expressed in percent.
  const BucketTokens plenty{1'000'000, 1'000'000, 1'000'000};
  for (int a = 0; a <= 100; a += 5) {
    for (int b = 0; a + b <= 100; b += 5) {
      const int c = 100 - a - b;
      const std::array<int, 3> pct = {a, b, c};
      std::size_t first_max = 0;
      for (std::size_t k = 1; k < 3; ++k) {
        if (pct[k] > pct[first_max]) first_max = k;
      }
      for (std::int64_t total = 1; total <= 60; ++total) {
        std::array<std::int64_t, 3> expected{};
        std::int64_t sum = 0;
        for (std::size_t k = 0; k < 3; ++k) {
          expected[k] = pct[k] * total / 100;
          sum += expected[k];
        }
        expected[first_max] += total - sum;
        const auto got = plan_mixture({a / 100.0, b / 100.0, c / 100.0}, plenty, total);
        EXPECT_EQ(got.values(), expected) << a << "/" << b << "/" << c << " total " << total;
      }
    }
  }
}

TEST(Mixture, Errors) {
  EXPECT_EQ(code_of([] { plan_mixture({0.66, 0.33, 0.01}, {100, 10, 100}, 100); }), ErrorCode::InfeasibleMixture);
  EXPECT_EQ(code_of([] { plan_mixture({0.6, 0.3, 0.0}, {100, 100, 100}, 100); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { plan_mixture({0.66, 0.33, 0.01}, {100, 100, 100}, 0); }), ErrorCode::InvalidArgument);
}

TEST(Mixture, TokenEstimate) {
  EXPECT_EQ(estimate_tokens("  one two\tthree\n", 1.0), 3);
  EXPECT_EQ(estimate_tokens("one two three", 1.5), 5);
  EXPECT_EQ(estimate_tokens("", 1.3), 0);
}

}  // namespace
}  // namespace mtforge::corpus
