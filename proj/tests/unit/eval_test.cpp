#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "../support/chrf_oracle.hpp"
#include "mtforge/core/error.hpp"
#include "mtforge/core/rng.hpp"
#include "mtforge/eval/chrf.hpp"
#include "mtforge/eval/ifmt.hpp"
#include "mtforge/eval/report.hpp"
#include "mtforge/eval/winrate.hpp"
#include "mtforge/gateway/mock.hpp"

namespace mtforge::eval {
namespace {

ErrorCode code_of(const std::function<void()>& fn, std::string* detail = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (detail) *detail = e.detail();
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

std::string random_string(Rng& rng, std::size_t max_len, const std::string& alphabet) {
  std::string s;
  const auto len = rng.index(max_len + 1);
  for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.index(alphabet.size())];
  return s;
}

// ---- chrF ----

TEST(Chrf, HandCheckedBigramCase) {
  // unigrams 3/4 both ways, bigrams 2/3 both ways; F equals P equals R per order.
  const double expected = 100.0 * (3.0 / 4.0 + 2.0 / 3.0) / 2.0;
  ChrfParams p;
  p.max_char_ngram = 2;
  EXPECT_NEAR(chrf("abcd", "abce", p), expected, 1e-12);
  EXPECT_NEAR(chrf("abcd", "abce", p), 70.83333333333333, 1e-9);
  EXPECT_NEAR(testing::oracle_chrf("abcd", "abce", 2), expected, 1e-12);
}

TEST(Chrf, Extremes) {
  EXPECT_DOUBLE_EQ(chrf("the cat sat", "the cat sat"), 100.0);
  EXPECT_DOUBLE_EQ(chrf("abcd", "wxyz"), 0.0);
  EXPECT_DOUBLE_EQ(chrf("", ""), 100.0);
  EXPECT_DOUBLE_EQ(chrf("", "abc"), 0.0);
  EXPECT_DOUBLE_EQ(chrf("abc", ""), 0.0);
  EXPECT_DOUBLE_EQ(chrf("a b", "ab"), 100.0);
}

TEST(Chrf, MatchesOracleOnRandomPairs) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto h = random_string(rng, 50, "abcde");
    const auto r = random_string(rng, 50, "abcde");
    EXPECT_NEAR(chrf(h, r), testing::oracle_chrf(h, r), 1e-9) << h << " | " << r;
  }
}

TEST(Chrf, WhitespaceAndUnicode) {
  ChrfParams keep;
  keep.whitespace_stripped = false;
  EXPECT_LT(chrf("a b", "ab", keep), 100.0);
  EXPECT_NEAR(chrf("a b", "ab", keep), testing::oracle_chrf("a b", "ab", 6, 2.0, false), 1e-12);
  // One code point per character: "é" against "e" shares nothing.
  EXPECT_DOUBLE_EQ(chrf("\xC3\xA9", "e"), 0.0);
  EXPECT_DOUBLE_EQ(chrf("caf\xC3\xA9", "caf\xC3\xA9"), 100.0);
  Rng rng(3);
  const std::string alphabet = "a \xE4\xB8\xAD";  // bytes mix into invalid sequences too
  for (int i = 0; i < 100; ++i) {
    const auto h = random_string(rng, 20, alphabet);
    const auto r = random_string(rng, 20, alphabet);
    // Invalid UTF-8 handling differs by design; compare only valid strings.
    const auto valid = [](const std::string& s) {
      for (std::size_t k = 0; k < s.size();) {
        const auto b = static_cast<unsigned char>(s[k]);
        if (b < 0x80) { ++k; continue; }
        if (b != 0xE4 || k + 2 >= s.size() || s[k + 1] != '\xB8' || s[k + 2] != '\xAD') return false;
        k += 3;
      }
      return true;
    };
    if (valid(h) && valid(r)) EXPECT_NEAR(chrf(h, r), testing::oracle_chrf(h, r), 1e-9);
  }
}

TEST(Chrf, BetaAsymmetry) {
  const std::string h = "abcdefgh", r = "abcd";
  EXPECT_GT(std::abs(chrf(h, r) - chrf(r, h)), 1.0);
  ChrfParams sym;
  sym.beta = 1.0;
  EXPECT_NEAR(chrf(h, r, sym), chrf(r, h, sym), 1e-12);
  // Recall-heavy: a short hypothesis that is a prefix loses more than a long one.
  EXPECT_LT(chrf(r, h), chrf(h, r));
}

TEST(Chrf, ParamsValidated) {
  ChrfParams p;
  p.max_char_ngram = 0;
  EXPECT_EQ(code_of([&] { chrf("a", "a", p); }), ErrorCode::InvalidArgument);
  p = {};
  p.beta = 0;
  EXPECT_EQ(code_of([&] { chrf("a", "a", p); }), ErrorCode::InvalidArgument);
}

TEST(CorpusChrf, Pooling) {
  EXPECT_EQ(code_of([] { corpus_chrf({}); }), ErrorCode::EmptyCorpus);
  EXPECT_DOUBLE_EQ(corpus_chrf({{"abcd", "abce"}}), chrf("abcd", "abce"));
  EXPECT_DOUBLE_EQ(corpus_chrf({{"abcd", "abce"}, {"abcd", "abce"}}), chrf("abcd", "abce"));

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < 10; ++i) pairs.emplace_back(random_string(rng, 50, "abcde"), random_string(rng, 50, "abcde"));
    const auto score = corpus_chrf(pairs);
    EXPECT_NEAR(score, testing::oracle_corpus_chrf(pairs), 1e-9);
    auto shuffled = pairs;
    std::reverse(shuffled.begin(), shuffled.end());
    EXPECT_DOUBLE_EQ(corpus_chrf(shuffled), score);
  }
  // Pooling is not averaging.
  const std::vector<std::pair<std::string, std::string>> uneven = {{"a", "a"}, {"abcdefghij", "zyxwvutsrq"}};
  EXPECT_NE(corpus_chrf(uneven), (chrf("a", "a") + chrf("abcdefghij", "zyxwvutsrq")) / 2);
}

// ---- IF-MT ----

IfMtAttributes attrs(int n_rules = 3) {
  IfMtAttributes a;
  a.source_language = LanguageTag("en", "English");
  a.target_language = LanguageTag("es_MX", "Spanish (Latin America)");
  a.topic = "Travel";
  a.subtopic = "Rail passes";
  a.style = "informal";
  a.source_length = "one paragraph";
  a.n_rules = n_rules;
  return a;
}

std::string response_with_rules(int rules) {
  std::string prompt = "Translate the text below into Spanish. Follow these rules:\n\n";
  for (int i = 1; i <= rules; ++i) prompt += std::to_string(i) + ". Rule number " + std::to_string(i) + "\n";
  prompt += "\nText: The pass costs $40 and starts on 3/1/2025.\n\nReturn only the translation.";
  return "Sure.\n<START OF PROMPT>\n" + prompt + "\n<END OF PROMPT>\n\n<START OF REFERENCE>\nEl pase cuesta...\n<END OF REFERENCE>\n";
}

TEST(IfMt, MetaPromptFilled) {
  const auto p = build_ifmt_meta_prompt(attrs(4));
  EXPECT_NE(p.find("given a set of 4 rules"), std::string::npos);
  EXPECT_NE(p.find("- Source language: English\n"), std::string::npos);
  EXPECT_NE(p.find("- Subtopic: Rail passes\n"), std::string::npos);
  EXPECT_NE(p.find("The translation should be in Spanish (Latin America), and"), std::string::npos);
  EXPECT_NE(p.find("<START OF REFERENCE>\n[INSERT ONLY THE REFERENCE TRANSLATION. NOTHING ELSE.]\n<END OF REFERENCE>"),
            std::string::npos);
  EXPECT_EQ(p.find("${"), std::string::npos);
  EXPECT_EQ(code_of([] { build_ifmt_meta_prompt(attrs(5)); }), ErrorCode::InvalidArgument);
  auto sneaky = attrs();
  sneaky.topic = "${style}";
  EXPECT_NE(build_ifmt_meta_prompt(sneaky).find("- Topic: ${style}\n"), std::string::npos);
}

TEST(IfMt, ResponseBlocks) {
  const auto b = parse_ifmt_response(response_with_rules(3));
  EXPECT_EQ(b.prompt.rfind("Translate the text below", 0), 0u);
  EXPECT_EQ(b.reference, "El pase cuesta...");
  std::string detail;
  auto broken = response_with_rules(3);
  broken.erase(broken.find("<END OF REFERENCE>"));
  EXPECT_EQ(code_of([&] { parse_ifmt_response(broken); }, &detail), ErrorCode::MarkerMissing);
  EXPECT_EQ(detail, "<END OF REFERENCE>");
  const std::string reordered = "<END OF PROMPT>\n<START OF PROMPT>\np\n<END OF REFERENCE>\n<START OF REFERENCE>\nr\n";
  EXPECT_EQ(code_of([&] { parse_ifmt_response(reordered); }, &detail), ErrorCode::MarkerMissing);
  EXPECT_EQ(detail, "ORDER");
  EXPECT_EQ(code_of([] { parse_ifmt_response("<START OF PROMPT>\n<END OF PROMPT><START OF REFERENCE>r<END OF REFERENCE>"); }),
            ErrorCode::ParseFailure);
}

TEST(IfMt, CountRules) {
  EXPECT_EQ(count_rules("Rules:\n1. a\n2. b\n3. c\n\nText: x"), 3);
  EXPECT_EQ(count_rules("Rules:\n\n1) a\n\n2) b\n\nThen 1. of the story"), 2);
  EXPECT_EQ(count_rules("- keep URLs\n- dates as DD/MM/YYYY\nText: hi"), 2);
  EXPECT_EQ(count_rules("just translate"), 0);
  EXPECT_EQ(count_rules("1. a\n3. c"), 1);
}

struct GenFixture {
  gateway::Gateway gw{std::make_shared<gateway::SimulatedClock>()};
  int rules;
  explicit GenFixture(int r) : rules(r) {
    gateway::EndpointConfig cfg;
    cfg.endpoint_id = "gen";
    gw.register_endpoint(cfg, gateway::mock::text_generator([this](const std::string&) { return response_with_rules(rules); }));
  }
};

TEST(IfMt, GenerateChecksRuleCount) {
  GenFixture ok(3);
  const auto g = generate_ifmt_instance(attrs(3), ok.gw, {"gen"}, "ifmt-0");
  EXPECT_FALSE(g.warning);
  EXPECT_EQ(g.instance.id, "ifmt-0");
  EXPECT_EQ(g.instance.n_rules, 3);
  EXPECT_EQ(g.instance.target_language.code(), "es_MX");

  GenFixture short_by_one(2);
  IfMtGenerateOptions strict{"gen"};
  strict.strict = true;
  EXPECT_EQ(code_of([&] { generate_ifmt_instance(attrs(3), short_by_one.gw, strict); }), ErrorCode::RuleCountMismatch);
  const auto lenient = generate_ifmt_instance(attrs(3), short_by_one.gw, {"gen"});
  ASSERT_TRUE(lenient.warning);
  EXPECT_NE(lenient.warning->find("found 2"), std::string::npos);
}

TEST(IfMt, InstanceJsonRoundTrip) {
  IfMtInstance inst{"i1", "prompt", 2, "ref", LanguageTag("en", "English"), LanguageTag("zh_CN", "Chinese")};
  const auto back = ifmt_instance_from_json(to_json(inst));
  EXPECT_EQ(back.prompt, "prompt");
  EXPECT_EQ(back.n_rules, 2);
  EXPECT_EQ(back.target_language.code(), "zh_CN");
  auto j = to_json(inst);
  j["n_rules"] = 7;
  EXPECT_EQ(code_of([&] { ifmt_instance_from_json(j); }), ErrorCode::DataError);
}

TEST(IfMt, JudgePrompt) {
  const auto p = build_ifmt_judge_prompt("PROMPT-X", "TRANSLATION-Y");
  EXPECT_NE(p.find("<START OF SOURCE TEXT>\nPROMPT-X\n<END OF SOURCE TEXT>"), std::string::npos);
  EXPECT_NE(p.find("<START OF TRANSLATION>\nTRANSLATION-Y\n<END OF TRANSLATION>"), std::string::npos);
  EXPECT_NE(p.find("6 - Perfect Compliance"), std::string::npos);
  EXPECT_NE(p.find("1 - No Compliance"), std::string::npos);
  EXPECT_LT(p.find("4 - Good Compliance"), p.find("3 - Fair Compliance"));
}

TEST(IfMt, JudgementParsing) {
  EXPECT_EQ(parse_ifmt_judgement(R"({"feedback":"ok","result":"5"})").score, 5);
  EXPECT_EQ(parse_ifmt_judgement(R"({"feedback":"ok","result":"5"})").feedback, "ok");
  EXPECT_EQ(code_of([] { parse_ifmt_judgement(R"({"feedback":"ok","result":"7"})"); }), ErrorCode::ParseFailure);

  struct Case {
    std::string text;
    int expected;  // 0 = ParseFailure
  };
  const std::vector<Case> cases = {
      {"```json\n{\"feedback\": \"fine\", \"result\": \"6\"}\n```", 6},
      {"```\n{\"feedback\": \"fine\", \"result\": 4}\n```", 4},
      {"  {\"result\": 1, \"feedback\": \"\"}  \n", 1},
      {"Here is my evaluation:\n{\"feedback\": \"x\", \"result\": \"3\"}\nThanks.", 3},
      {"{\"feedback\": \"x\", \"result\": 2.0}", 2},
      {"{\"feedback\": \"x\", \"result\": \" 6 \"}", 6},
      {"{\"feedback\": \"x\", \"result\": 4.5}", 0},
      {"{\"feedback\": \"x\", \"result\": \"4.5\"}", 0},
      {"{\"feedback\": \"x\", \"result\": 0}", 0},
      {"{\"feedback\": \"x\"}", 0},
      {"{\"feedback\": \"x\", \"result\": null}", 0},
      {"result: 5", 0},
      {"[5]", 0},
      {"```json\n{\"feedback\": \"x\", \"result\": \"five\"}\n```", 0},
  };
  for (const auto& c : cases) {
    if (c.expected == 0) {
      EXPECT_EQ(code_of([&] { parse_ifmt_judgement(c.text); }), ErrorCode::ParseFailure) << c.text;
    } else {
      EXPECT_EQ(parse_ifmt_judgement(c.text).score, c.expected) << c.text;
    }
  }
}

TEST(IfMt, JudgeCallsEndpoint) {
  gateway::Gateway gw{std::make_shared<gateway::SimulatedClock>()};
  gateway::EndpointConfig cfg;
  cfg.endpoint_id = "judge";
  std::string seen;
  gw.register_endpoint(cfg, gateway::mock::text_generator([&](const std::string& p) {
                         seen = p;
                         return R"({"feedback":"two rules broken","result":"3"})";
                       }));
  IfMtInstance inst{"i", "the prompt", 2, "ref", LanguageTag("en", "English"), LanguageTag("es", "Spanish")};
  const auto j = judge_ifmt(inst, "la traduccion", gw, "judge");
  EXPECT_EQ(j.score, 3);
  EXPECT_EQ(seen, build_ifmt_judge_prompt("the prompt", "la traduccion"));
}

// ---- win rate ----

TEST(WinRate, Examples) {
  using O = Outcome;
  EXPECT_DOUBLE_EQ(win_rate({O::Win, O::Loss, O::Tie, O::Win}), 0.625);
  EXPECT_DOUBLE_EQ(win_rate({O::Win, O::Win}), 1.0);
  EXPECT_DOUBLE_EQ(win_rate({O::Tie, O::Tie, O::Tie}), 0.5);
  EXPECT_DOUBLE_EQ(win_rate({O::Win, O::Tie}, 0.0), 0.5);
  EXPECT_EQ(code_of([] { win_rate({}); }), ErrorCode::EmptyOutcomes);
}

TEST(WinRate, FlipComplement) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    std::vector<Outcome> os, flip;
    const auto n = 1 + rng.index(30);
    for (std::size_t i = 0; i < n; ++i) {
      os.push_back(rng.index(2) ? Outcome::Win : Outcome::Loss);
      flip.push_back(flipped(os.back()));
    }
    EXPECT_NEAR(win_rate(os) + win_rate(flip), 1.0, 1e-12);
  }
}

TEST(WinRate, ArenaJudgeMapsSlots) {
  gateway::Gateway gw{std::make_shared<gateway::SimulatedClock>()};
  gateway::EndpointConfig cfg;
  cfg.endpoint_id = "judge";
  cfg.cache_enabled = false;
  // Prefers whichever response mentions "good".
  gw.register_endpoint(cfg, gateway::mock::text_generator([](const std::string& p) {
                         const auto a = p.find("[Start of Assistant A's Response]");
                         const auto b = p.find("[Start of Assistant B's Response]");
                         const auto good = p.find("good answer");
                         return std::string("reasoning\nChosen: [") + ((good > a && good < b) ? "A" : "B") + "]";
                       }));
  std::set<bool> slots;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const auto win = judge_arena({"x", "q", "good answer", "meh", ""}, gw, "judge", seed);
    EXPECT_EQ(win.outcome, Outcome::Win);
    const auto loss = judge_arena({"x", "q", "meh", "good answer", ""}, gw, "judge", seed);
    EXPECT_EQ(loss.outcome, Outcome::Loss);
    slots.insert(win.candidate_shown_as_a);
  }
  EXPECT_EQ(slots.size(), 2u);
}

// ---- report ----

double naive_mean(const std::map<std::string, double>& scores, const std::vector<std::string>& langs) {
  double s = 0;
  for (const auto& l : langs) s += scores.at(l);
  return s / static_cast<double>(langs.size());
}

TEST(Report, SevenLanguagesGiveAvg7) {
  std::vector<std::pair<std::string, double>> per;
  double sum = 0;
  int i = 0;
  const auto groups = default_language_groups();
  for (const auto& l : groups[0].languages) {
    per.emplace_back(l, 50.0 + i * 1.5);
    sum += 50.0 + i++ * 1.5;
  }
  const auto avgs = group_averages(per, default_language_groups());
  ASSERT_EQ(avgs.size(), 3u);
  ASSERT_TRUE(avgs[0].average);
  EXPECT_NEAR(*avgs[0].average, sum / 7, 1e-12);
  EXPECT_FALSE(avgs[1].average);
  EXPECT_EQ(avgs[1].missing.size(), 9u);
  EXPECT_EQ(avgs[2].languages.size(), 23u);
}

TEST(Report, SingleLanguageGroup) {
  const auto avgs = group_averages({{"de", 42.5}}, {{"only", {"de"}}});
  EXPECT_DOUBLE_EQ(*avgs[0].average, 42.5);
}

TEST(Report, TwentyFourLanguagesMatchNaiveOracle) {
  Rng rng(24);
  std::vector<LanguageGroup> groups{{"G7", {}}, {"G15", {}}, {"Gall", {}}};
  std::map<std::string, double> scores;
  std::vector<std::pair<std::string, double>> per;
  for (int i = 0; i < 24; ++i) {
    const auto lang = "l" + std::to_string(i);
    groups[i < 7 ? 0 : i < 15 ? 1 : 2].languages.push_back(lang);
    scores[lang] = 100 * rng.uniform();
    per.emplace_back(lang, scores[lang]);
  }
  std::shuffle(per.begin(), per.end(), std::mt19937(1));
  const auto avgs = group_averages(per, groups);
  std::vector<std::string> cum;
  for (std::size_t g = 0; g < 3; ++g) {
    cum.insert(cum.end(), groups[g].languages.begin(), groups[g].languages.end());
    EXPECT_NEAR(*avgs[g].average, naive_mean(scores, cum), 1e-9);
  }
  const auto [lo, hi] = std::minmax_element(per.begin(), per.end(), [](auto& a, auto& b) { return a.second < b.second; });
  for (const auto& a : avgs) {
    EXPECT_GE(*a.average, lo->second);
    EXPECT_LE(*a.average, hi->second);
  }
}

TEST(Report, Errors) {
  EXPECT_EQ(code_of([] { group_averages({{"xx", 1.0}}, default_language_groups()); }), ErrorCode::UnknownLanguageGroup);
  EXPECT_NO_THROW(group_averages({{"xx", 1.0}}, {}));
  EXPECT_EQ(code_of([] { validate_groups({{"a", {"de"}}, {"b", {"de"}}}); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { validate_groups({{"a", {}}, {"a", {}}}); }), ErrorCode::ConfigInvalid);
  EvalReport r;
  r.per_language = {{"de_DE", 1.0}};
  EXPECT_EQ(code_of([&] { emit_report(r, default_language_groups(), ReportLayout::Summary, {"Avg-99"}); }),
            ErrorCode::UnknownLanguageGroup);
}

TEST(Report, AggregatesAndExclusions) {
  EvalReport r;
  r.system = "sys";
  r.metric = "if-mt";
  r.per_instance.push_back({"a", "es", 6, MetricScore{"chrF", 50, Direction::HigherBetter}, {}, {}, ""});
  r.per_instance.push_back({"b", "es", 3, MetricScore{"chrF", 70, Direction::HigherBetter}, {}, {}, ""});
  r.per_instance.push_back({"c", "es", {}, {}, {}, {}, "ParseFailure: result out of range: 9"});
  compute_aggregates(r);
  EXPECT_EQ(r.excluded, 1u);
  const std::map<std::string, double> agg(r.aggregates.begin(), r.aggregates.end());
  EXPECT_DOUBLE_EQ(agg.at("if_mean"), 4.5);
  EXPECT_DOUBLE_EQ(agg.at("mt_mean"), 60.0);
  EXPECT_DOUBLE_EQ(agg.at("instances"), 2.0);
  EXPECT_FALSE(agg.count("win_rate"));
  const auto out = emit_report(r, {}, ReportLayout::Summary);
  EXPECT_NE(out.text.find("if_mean: 4.5000"), std::string::npos);
  EXPECT_NE(out.text.find("excluded: 1"), std::string::npos);
  EXPECT_EQ(out.json["excluded"], 1);
}

TEST(Report, PerLanguageTable) {
  EvalReport r;
  r.system = "gpt";
  r.metric = "chrF";
  r.per_language = {{"de", 60.0}, {"fr", 50.0}, {"ja", 30.0}};
  const auto out = emit_report(r, {{"Hi", {"de", "fr"}}, {"All", {"ja"}}}, ReportLayout::PerLanguage);
  const auto nl = out.text.find('\n');
  const auto header = out.text.substr(0, nl);
  const auto row = out.text.substr(nl + 1);
  EXPECT_EQ(header.find("System"), 0u);
  EXPECT_NE(header.find("Hi"), std::string::npos);
  EXPECT_NE(row.find("55.00"), std::string::npos);
  EXPECT_NE(row.find("46.67"), std::string::npos);
  // Columns line up.
  EXPECT_EQ(header.find("de"), row.find("60.00"));
  EXPECT_NEAR(out.json["groups"][1]["average"].get<double>(), 140.0 / 3, 1e-12);
  EXPECT_EQ(out.json["per_language"].size(), 3u);
}

}  // namespace
}  // namespace mtforge::eval
