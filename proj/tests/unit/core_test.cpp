#include <gtest/gtest.h>

#include <random>

#include "mtforge/core/error.hpp"
#include "mtforge/core/json.hpp"
#include "mtforge/core/rng.hpp"
#include "mtforge/core/text.hpp"
#include "mtforge/core/types.hpp"

namespace mtforge {
namespace {

MetricScore chrf(double v) { return {"chrF", v, Direction::HigherBetter}; }
MetricScore metricx(double v) { return {"metricx", v, Direction::LowerBetter}; }

TEST(CompareScores, HigherBetterUsesNumericOrder) {
  EXPECT_EQ(compare_scores(chrf(60.11), chrf(48.97)), Comparison::ABetter);
  EXPECT_EQ(compare_scores(chrf(48.97), chrf(60.11)), Comparison::BBetter);
}

TEST(CompareScores, LowerBetterInvertsOrder) {
  // -4.58 < -4.00, so the -4.58 score wins.
  EXPECT_EQ(compare_scores(metricx(-4.00), metricx(-4.58)), Comparison::BBetter);
  EXPECT_EQ(compare_scores(metricx(-4.58), metricx(-4.00)), Comparison::ABetter);
}

TEST(CompareScores, ExactEquality) {
  const MetricScore m{"m", 0.5, Direction::HigherBetter};
  EXPECT_EQ(compare_scores(m, m), Comparison::Equal);
  EXPECT_EQ(compare_scores(m, MetricScore{"m", 0.5 + 1e-15, Direction::HigherBetter}),
            Comparison::BBetter);
}

TEST(CompareScores, MismatchedMetricsThrow) {
  try {
    compare_scores(chrf(1), metricx(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MetricMismatch);
  }
}

TEST(CompareScores, SwappingArgumentsInvertsResult) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int i = 0; i < 2000; ++i) {
    const Direction d = i % 2 ? Direction::HigherBetter : Direction::LowerBetter;
    const MetricScore a{"m", small(gen) / 2.0, d};
    const MetricScore b{"m", small(gen) / 2.0, d};
    const Comparison ab = compare_scores(a, b);
    const Comparison ba = compare_scores(b, a);
    if (ab == Comparison::Equal) {
      EXPECT_EQ(ba, Comparison::Equal);
    } else {
      EXPECT_EQ(ba, ab == Comparison::ABetter ? Comparison::BBetter : Comparison::ABetter);
    }
  }
}

TEST(ScoreBundle, RejectsOutOfRangeScores) {
  for (int reasoning = -10; reasoning <= 10; ++reasoning) {
    for (int readability = -10; readability <= 10; ++readability) {
      const bool valid = reasoning >= 1 && reasoning <= 5 && readability >= 1 && readability <= 5;
      if (valid) {
        EXPECT_NO_THROW(ScoreBundle(Category::Coding, reasoning, readability));
      } else {
        EXPECT_THROW(ScoreBundle(Category::Coding, reasoning, readability), Error);
      }
    }
  }
}

TEST(Category, MatchesClosedListLoosely) {
  EXPECT_EQ(match_category("Translation").category, Category::Translation);
  EXPECT_EQ(match_category("  mathematical reasoning. ").category, Category::MathematicalReasoning);
  EXPECT_EQ(match_category("**Creative Writing and Persona**").category,
            Category::CreativeWritingAndPersona);
  const auto unknown = match_category("Poetry");
  EXPECT_EQ(unknown.category, Category::Other);
  EXPECT_FALSE(unknown.recognized);
  EXPECT_TRUE(match_category("Other").recognized);
  EXPECT_EQ(all_categories().size(), static_cast<std::size_t>(kCategoryCount));
}

TEST(LanguageTag, ValidatesCode) {
  EXPECT_NO_THROW(LanguageTag("en", "English"));
  EXPECT_NO_THROW(LanguageTag("pt_BR", "Portuguese (Brazil)"));
  EXPECT_THROW(LanguageTag("", "x"), Error);
  EXPECT_THROW(LanguageTag("pt-BR", "x"), Error);
  EXPECT_THROW(LanguageTag("pt_", "x"), Error);
  EXPECT_THROW(LanguageTag("en", ""), Error);
}

TEST(Conversation, EnforcesAlternation) {
  EXPECT_THROW(Conversation({}, "x"), Error);
  EXPECT_THROW(Conversation({{Role::Assistant, "hi"}}, "x"), Error);
  EXPECT_THROW(Conversation({{Role::User, "a"}, {Role::User, "b"}}, "x"), Error);
  const Conversation c({{Role::User, "a"}, {Role::Assistant, "b"}, {Role::User, "c"}}, "Aya");
  EXPECT_EQ(c.last_user_text(), "c");
}

TEST(Conversation, JsonRoundTripPreservesAlternation) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Turn> turns;
    const auto n = 1 + rng.index(6);
    for (std::uint64_t i = 0; i < n; ++i) {
      turns.push_back({i % 2 ? Role::Assistant : Role::User, "t" + std::to_string(rng.next() % 1000)});
    }
    const Conversation c(turns, "src" + std::to_string(trial));
    const Json j = c;
    const auto back = Json::parse(j.dump()).get<Conversation>();
    EXPECT_EQ(back, c);
    EXPECT_EQ(j.at("turns").at(0).at("role"), "user");
  }
}

TEST(Json, CanonicalFieldNames) {
  const Json s = MetricScore{"chrF", 1.5, Direction::LowerBetter};
  EXPECT_EQ(s.at("metric_id"), "chrF");
  EXPECT_EQ(s.at("direction"), "lower_better");
  EXPECT_EQ(s.get<MetricScore>(), (MetricScore{"chrF", 1.5, Direction::LowerBetter}));

  const Json b = ScoreBundle(Category::Translation, 4, 5);
  EXPECT_EQ(b.at("category"), "Translation");
  EXPECT_EQ(b.get<ScoreBundle>(), ScoreBundle(Category::Translation, 4, 5));

  const JudgeVerdict v{Choice::A, "better fluency"};
  EXPECT_FALSE(verdict_to_json(v, false).contains("rationale"));
  EXPECT_EQ(verdict_to_json(v, true).get<JudgeVerdict>(), v);
}

TEST(Text, Utf8AndSearchHelpers) {
  EXPECT_EQ(utf8_decode("a\xC3\xA9\xE4\xB8\xAD").size(), 3u);
  EXPECT_EQ(utf8_decode("\xFF").front(), U'�');
  EXPECT_EQ(rfind_icase("Final score: 1 FINAL SCORE: 2", "final score:"), 15u);
  EXPECT_EQ(parse_int("+4"), 4);
  EXPECT_FALSE(parse_int("4.5").has_value());
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Rng, DeterministicAndBounded) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.index(7);
    EXPECT_EQ(x, b.index(7));
    EXPECT_LT(x, 7u);
  }
}

}  // namespace
}  // namespace mtforge
