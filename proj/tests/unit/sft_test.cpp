#include <gtest/gtest.h>

#include <set>

#include "mtforge/core/error.hpp"
#include "mtforge/core/rng.hpp"
#include "mtforge/core/text.hpp"
#include "mtforge/gateway/mock.hpp"
#include "mtforge/sft/pipeline.hpp"
#include "mtforge/sft/rebalance.hpp"
#include "mtforge/sft/selection.hpp"
#include "mtforge/sft/translation_score.hpp"
#include "mtforge/sft/triage.hpp"

namespace mtforge::sft {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

std::string parse_failure_detail(std::string_view text) {
  try {
    parse_triage(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseFailure);
    return e.detail();
  }
  return "parsed";
}

Conversation conv(std::string user, std::string source = "Aya", std::string answer = "") {
  std::vector<Turn> turns{{Role::User, std::move(user)}};
  if (!answer.empty()) turns.push_back({Role::Assistant, std::move(answer)});
  return Conversation(std::move(turns), std::move(source));
}

TEST(Triage, ParsesResponseFormat) {
  const auto s = parse_triage("Category: Translation\nReasoning: 4\nReadability: 5");
  EXPECT_EQ(s.category(), Category::Translation);
  EXPECT_EQ(s.reasoning(), 4);
  EXPECT_EQ(s.readability(), 5);
  EXPECT_TRUE(s.category_recognized());

  const auto t = parse_triage("Sure, here is my analysis.\n\n**Category:** coding\n**Reasoning:** 3/5\n"
                              "- readability: 2 out of 5\nThanks!");
  EXPECT_EQ(t, ScoreBundle(Category::Coding, 3, 2));

  const auto u = parse_triage("Category: Poetry\nReasoning: 1\nReadability: 1");
  EXPECT_EQ(u.category(), Category::Other);
  EXPECT_FALSE(u.category_recognized());

  // Echoed format lines before the real answer lose to the last occurrence.
  EXPECT_EQ(parse_triage("Category: <one of the categories above>\nReasoning: <score out of 5>\n"
                         "Readability: <score out of 5>\nCategory: Summarization\nReasoning: 2\nReadability: 4"),
            ScoreBundle(Category::Summarization, 2, 4));
}

TEST(Triage, FailuresNameEveryField) {
  EXPECT_EQ(parse_failure_detail("Reasoning: 4\nReadability: 5"), "category");
  EXPECT_EQ(parse_failure_detail("Category: Coding\nReasoning: 9\nReadability: 5"), "reasoning out of range");
  EXPECT_EQ(parse_failure_detail("Category: Coding\nReasoning: 4.5\n"), "reasoning not an integer, readability");
  EXPECT_EQ(parse_failure_detail("nothing useful"), "category, reasoning, readability");
  EXPECT_EQ(parse_failure_detail("Category: Coding\nReasoning: 0\nReadability: 6"),
            "reasoning out of range, readability out of range");
}

TEST(Triage, PromptEmbedsConversation) {
  const auto p = build_triage_prompt(conv("Translate 'hi' to French", "Aya", "Salut"));
  EXPECT_NE(p.find("<conversation>\n\nUser: Translate 'hi' to French\n\nAssistant: Salut\n\n</conversation>"),
            std::string::npos);
  EXPECT_NE(p.find("Readability: <score out of 5>"), std::string::npos);
}

TEST(KeepRecord, Examples) {
  EXPECT_TRUE(keep_record(ScoreBundle(Category::Other, 4, 4), "Aya"));
  EXPECT_FALSE(keep_record(ScoreBundle(Category::Other, 3, 5), "Magpie"));
  EXPECT_TRUE(keep_record(ScoreBundle(Category::Other, 2, 2), "OpenHermes-2.5"));
  EXPECT_FALSE(keep_record(ScoreBundle(Category::Other, 5, 3), "openhermes-2.5"));
}

TEST(KeepRecord, MonotoneInBothScores) {
  for (const std::string src : {"Aya", "OpenHermes-2.5"}) {
    for (int r = 1; r <= 5; ++r) {
      for (int d = 1; d <= 5; ++d) {
        if (!keep_record(ScoreBundle(Category::Other, r, d), src)) continue;
        for (int r2 = r; r2 <= 5; ++r2) {
          for (int d2 = d; d2 <= 5; ++d2) EXPECT_TRUE(keep_record(ScoreBundle(Category::Other, r2, d2), src));
        }
      }
    }
  }
}

// Reward endpoint answering from a table keyed by answer text.
struct RewardFixture {
  gateway::Gateway gw{std::make_shared<gateway::SimulatedClock>()};
  std::map<std::string, double> table;

  RewardFixture() {
    gateway::EndpointConfig cfg;
    cfg.endpoint_id = "rm";
    cfg.requests_per_minute = 1'000'000;
    gw.register_endpoint(cfg, gateway::mock::reward([this](const Json&, const std::string& answer) {
                           return table.at(answer);
                         }));
  }
};

SftRecord record_with(std::vector<std::string> answers) {
  SftRecord r{"r", conv("question"), "", std::nullopt, {}, std::nullopt, std::nullopt};
  for (std::size_t i = 0; i < answers.size(); ++i) r.candidates.push_back({"t" + std::to_string(i), answers[i], std::nullopt, ""});
  return r;
}

TEST(SelectAnswer, ArgmaxAndStableTies) {
  RewardFixture f;
  f.table = {{"a", 0.1}, {"b", 0.9}, {"c", 0.5}, {"d", 0.7}, {"e", 0.7}};
  auto r = record_with({"a", "b", "c"});
  select_answer(r, f.gw, "rm");
  EXPECT_EQ(r.selected_index, 1u);
  EXPECT_NO_THROW(r.validate());

  auto single = record_with({"c"});
  select_answer(single, f.gw, "rm");
  EXPECT_EQ(single.selected_index, 0u);

  auto tie = record_with({"d", "e"});
  select_answer(tie, f.gw, "rm");
  EXPECT_EQ(tie.selected_index, 0u);

  auto none = record_with({});
  EXPECT_EQ(code_of([&] { select_answer(none, f.gw, "rm"); }), ErrorCode::PreconditionViolation);
}

TEST(SelectAnswer, MalformedCandidatesAreSkipped) {
  gateway::Gateway gw(std::make_shared<gateway::SimulatedClock>());
  gateway::EndpointConfig cfg;
  cfg.endpoint_id = "rm";
  gw.register_endpoint(cfg, std::make_shared<gateway::FunctionTransport>(
                                [](std::string_view path, const std::string& body) -> std::string {
                                  if (path == "/info") return R"({"kind":"reward"})";
                                  const auto j = Json::parse(body);
                                  if (j["answer"] == "bad") return R"({"score":1})";
                                  return Json{{"reward", j["answer"] == "ok" ? 0.2 : 0.1}}.dump();
                                }));
  auto r = record_with({"bad", "meh", "ok"});
  select_answer(r, gw, "rm");
  EXPECT_EQ(r.selected_index, 2u);
  EXPECT_FALSE(r.candidates[0].reward);
  EXPECT_FALSE(r.candidates[0].failure.empty());

  auto all_bad = record_with({"bad", "bad"});
  EXPECT_EQ(code_of([&] { select_answer(all_bad, gw, "rm"); }), ErrorCode::AllCandidatesFailed);
}

TEST(SelectAnswer, PermutationEquivariantForDistinctRewards) {
  RewardFixture f;
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> answers;
    const auto n = 1 + rng.index(6);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto text = "ans" + std::to_string(trial) + "_" + std::to_string(i);
      f.table[text] = static_cast<double>(rng.next() % 1'000'000);  // distinct with overwhelming odds
      answers.push_back(text);
    }
    auto r = record_with(answers);
    select_answer(r, f.gw, "rm");
    for (std::size_t k = answers.size(); k > 1; --k) std::swap(answers[k - 1], answers[rng.index(k)]);
    auto p = record_with(answers);
    select_answer(p, f.gw, "rm");
    EXPECT_EQ(r.selected()->text, p.selected()->text);
  }
}

TEST(GatherCandidates, OriginalFirstThenTeachers) {
  gateway::Gateway gw(std::make_shared<gateway::SimulatedClock>());
  for (const std::string id : {"qwen", "llama"}) {
    gateway::EndpointConfig cfg;
    cfg.endpoint_id = id;
    gw.register_endpoint(cfg, gateway::mock::text_generator([id](const std::string& p) { return id + ":" + p; }));
  }
  SftRecord r{"r", conv("hello", "Aya", "hi there"), "", std::nullopt, {}, std::nullopt, std::nullopt};
  gather_candidates(r, gw, {"qwen", "llama"});
  ASSERT_EQ(r.candidates.size(), 3u);
  EXPECT_EQ(r.candidates[0].teacher_id, "original");
  EXPECT_EQ(r.candidates[0].text, "hi there");
  EXPECT_EQ(r.candidates[1].text, "qwen:hello");
  EXPECT_EQ(r.candidates[2].text, "llama:hello");
}

TEST(FinalScore, Parsing) {
  EXPECT_EQ(parse_final_score("The translation is accurate.\nFinal Score: 5"), 5);
  EXPECT_EQ(parse_final_score("**Final Score:** 4"), 4);
  EXPECT_EQ(parse_final_score("Final Score: 2\nOn reflection...\nFinal Score: 3"), 3);
  EXPECT_EQ(parse_final_score("final score: [1]"), 1);
  EXPECT_EQ(code_of([] { parse_final_score("Final Score: 4.5"); }), ErrorCode::ParseFailure);
  EXPECT_EQ(code_of([] { parse_final_score("Final Score: 6"); }), ErrorCode::ParseFailure);
  EXPECT_EQ(code_of([] { parse_final_score("Score: 4"); }), ErrorCode::ParseFailure);
}

TEST(FinalScore, LastOccurrenceWinsOnSyntheticFixtures) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text = "Feedback.";
    int last = 0;
    const auto k = 1 + rng.index(4);
    for (std::uint64_t i = 0; i < k; ++i) {
      last = 1 + static_cast<int>(rng.index(5));
      text += "\nsome prose " + std::to_string(rng.index(100)) + "\nFinal Score: " + std::to_string(last);
    }
    EXPECT_EQ(parse_final_score(text), last);
  }
}

TEST(FinalScore, PromptLayout) {
  const auto p = build_translation_score_prompt("Translate to German: cat", "Katze");
  EXPECT_NE(p.find("[User Instructions]\n\nTranslate to German: cat\n\n[End of User Instructions]"), std::string::npos);
  EXPECT_NE(p.find("[Assistant Translation]\n\nKatze\n\n[End of Assistant Translation]"), std::string::npos);
  EXPECT_TRUE(p.ends_with("Final Score: <score>"));
}

TEST(Rebalance, HitsTargetRatio) {
  std::vector<SftRecord> records;
  for (int i = 0; i < 100; ++i) {
    auto r = record_with({"x"});
    r.scores = ScoreBundle(i < 60 ? Category::Translation : Category::Coding, 4, 4);
    records.push_back(std::move(r));
  }
  const auto kept = rebalance_translation_ratio(records, 0.22, 3);
  std::size_t mt = 0;
  for (auto i : kept) mt += records[i].scores->category() == Category::Translation;
  EXPECT_EQ(kept.size() - mt, 40u);      // all non-translation kept
  EXPECT_EQ(mt, 11u);                    // floor(0.22 * 40 / 0.78)
  EXPECT_TRUE(std::is_sorted(kept.begin(), kept.end()));
  EXPECT_EQ(kept, rebalance_translation_ratio(records, 0.22, 3));

  const auto more_mt = rebalance_translation_ratio(records, 0.9, 3);
  EXPECT_EQ(more_mt.size(), 66u);  // 60 translation + floor(60 * 0.1 / 0.9)
  EXPECT_EQ(rebalance_translation_ratio(records, 0.0, 1).size(), 40u);
  EXPECT_EQ(rebalance_translation_ratio(records, 1.0, 1).size(), 60u);
}

// 1,000 synthetic records: judge scores come from a hash of the user turn, the
// reward table from a hash of each answer.
struct FunnelFixture {
  gateway::Gateway gw{std::make_shared<gateway::SimulatedClock>()};

  static ScoreBundle judged(const std::string& user) {
    const auto h = stable_hash(user, 1);
    return ScoreBundle(all_categories()[h % kCategoryCount], 1 + static_cast<int>((h >> 8) % 5),
                       1 + static_cast<int>((h >> 16) % 5));
  }
  static double reward_of(const std::string& answer) {
    return static_cast<double>(stable_hash(answer, 2) % 7);  // coarse: many ties
  }

  FunnelFixture() {
    auto reg = [&](const std::string& id, std::shared_ptr<gateway::Transport> t) {
      gateway::EndpointConfig cfg;
      cfg.endpoint_id = id;
      cfg.requests_per_minute = 1'000'000;
      gw.register_endpoint(cfg, std::move(t));
    };
    reg("judge", gateway::mock::text_generator([](const std::string& prompt) {
          const auto start = prompt.find("User: ") + 6;
          const auto user = prompt.substr(start, prompt.find("\n\n", start) - start);
          const auto s = judged(user);
          return "Category: " + std::string(to_string(s.category())) + "\nReasoning: " +
                 std::to_string(s.reasoning()) + "\nReadability: " + std::to_string(s.readability());
        }));
    reg("rm", gateway::mock::reward([](const Json&, const std::string& a) { return reward_of(a); }));
  }
};

TEST(Curation, ThousandRecordFunnelMatchesSetComprehension) {
  FunnelFixture f;
  const std::vector<std::string> sources = {"Aya", "Magpie", "OpenHermes-2.5", "Tulu"};
  std::vector<SftRecord> records;
  for (int i = 0; i < 1000; ++i) {
    SftRecord r{"rec" + std::to_string(i), conv("question " + std::to_string(i), sources[i % 4]), "", std::nullopt,
                {}, std::nullopt, std::nullopt};
    for (int k = 0; k < 1 + i % 5; ++k) r.candidates.push_back({"t" + std::to_string(k), "answer " + std::to_string(i) + "." + std::to_string(k), std::nullopt, ""});
    records.push_back(std::move(r));
  }
  // Oracle: set comprehension over the mock judge table.
  std::set<std::string> expected;
  std::map<std::string, std::size_t> expected_pick;
  for (const auto& r : records) {
    const auto s = FunnelFixture::judged(r.conversation.last_user_text());
    if ((s.reasoning() >= 4 && s.readability() >= 4) || r.conversation.source_dataset() == "OpenHermes-2.5") {
      expected.insert(r.id);
      std::size_t best = 0;
      for (std::size_t k = 1; k < r.candidates.size(); ++k) {
        if (FunnelFixture::reward_of(r.candidates[k].text) > FunnelFixture::reward_of(r.candidates[best].text)) best = k;
      }
      expected_pick[r.id] = best;
    }
  }
  CurationOptions opts;
  opts.judge_endpoint = "judge";
  opts.reward_endpoint = "rm";
  opts.concurrency = 8;
  const auto result = curate_sft(records, f.gw, opts);
  std::set<std::string> got;
  for (const auto& r : result.selected) {
    got.insert(r.id);
    EXPECT_EQ(r.selected_index, expected_pick.at(r.id)) << r.id;
    EXPECT_NO_THROW(r.validate());
  }
  EXPECT_EQ(got, expected);
  EXPECT_EQ(result.counts.ingested, 1000u);
  EXPECT_EQ(result.counts.triaged, 1000u);
  EXPECT_EQ(result.counts.kept, expected.size());
  EXPECT_EQ(result.counts.selected, expected.size());
  EXPECT_GT(expected.size(), 250u);
}

TEST(Curation, TriageParseFailuresAreCountedOrFatal) {
  gateway::Gateway gw(std::make_shared<gateway::SimulatedClock>());
  gateway::EndpointConfig cfg;
  cfg.endpoint_id = "judge";
  gw.register_endpoint(cfg, gateway::mock::text_generator([](const std::string& p) {
                         return p.find("odd") != std::string::npos ? "no idea" : "Category: Coding\nReasoning: 5\nReadability: 5";
                       }));
  cfg.endpoint_id = "rm";
  gw.register_endpoint(cfg, gateway::mock::reward([](const Json&, const std::string&) { return 1.0; }));
  std::vector<SftRecord> records;
  records.push_back({"a", conv("even", "Aya", "x"), "", std::nullopt, {}, std::nullopt, std::nullopt});
  records.push_back({"b", conv("odd", "Aya", "y"), "", std::nullopt, {}, std::nullopt, std::nullopt});
  CurationOptions opts;
  opts.judge_endpoint = "judge";
  opts.reward_endpoint = "rm";
  const auto result = curate_sft(records, gw, opts);
  EXPECT_EQ(result.counts.triage_failures, 1u);
  ASSERT_EQ(result.selected.size(), 1u);
  EXPECT_EQ(result.selected[0].candidates[0].teacher_id, "original");
  opts.strict = true;
  EXPECT_EQ(code_of([&] { curate_sft(records, gw, opts); }), ErrorCode::ParseFailure);
}

TEST(Records, JsonRoundTrip) {
  auto r = record_with({"a", "b"});
  r.scores = ScoreBundle(Category::Translation, 4, 5);
  r.candidates[0].reward = 0.5;
  const auto j = to_json(r);
  const auto back = sft_record_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(code_of([] { sft_record_from_json(Json::parse(R"({"conversation":{"turns":[]}})")); }),
            ErrorCode::DataError);
  EXPECT_EQ(code_of([] { sft_record_from_json(Json::parse(R"({"id":"x"})")); }), ErrorCode::DataError);
}

}  // namespace
}  // namespace mtforge::sft
