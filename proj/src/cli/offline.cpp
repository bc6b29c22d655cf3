#include "mtforge/cli/offline.hpp"

#include <algorithm>

#include "mtforge/core/rng.hpp"
#include "mtforge/core/text.hpp"
#include "mtforge/gateway/mock.hpp"
#include "mtforge/guideline/prompts.hpp"

namespace mtforge::cli::offline {
namespace {

std::string between(std::string_view text, std::string_view open, std::string_view close) {
  const auto a = text.find(open);
  if (a == std::string_view::npos) return "";
  const auto from = a + open.size();
  const auto b = text.find(close, from);
  return std::string(text.substr(from, b == std::string_view::npos ? std::string_view::npos : b - from));
}

std::string line_after(std::string_view text, std::string_view key) {
  const auto a = text.rfind(key);
  if (a == std::string_view::npos) return "";
  const auto from = a + key.size();
  const auto b = text.find('\n', from);
  return std::string(text.substr(from, b == std::string_view::npos ? std::string_view::npos : b - from));
}

const std::vector<std::string>& rule_pool() {
  static const std::vector<std::string> kRules = {
      "Write every date in DD/MM/YYYY format.",
      "Keep all URLs and email addresses exactly as in the source.",
      "Convert all amounts in US dollars to euros at 1 USD = 0.9 EUR.",
      "Render product names in uppercase.",
      "Keep measurements in metric units with the unit symbol.",
      "Put every proper noun in bold using **double asterisks**.",
  };
  return kRules;
}

const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> kWords = {"the",   "report", "shows", "a",      "steady", "rise",
                                                  "in",    "demand", "for",   "rail",   "travel", "this",
                                                  "year",  "while",  "costs", "remain", "stable", "overall"};
  return kWords;
}

std::string ifmt_generation(std::string_view prompt, std::uint64_t seed) {
  const auto n = parse_int(between(prompt, "given a set of ", " rules")).value_or(3);
  const auto topic = line_after(prompt, "- Topic: ");
  const auto source_lang = line_after(prompt, "- Source language: ");
  const auto target = between(prompt, "The translation should be in ", ", and your");
  const auto key = std::string(prompt) + "#" + std::to_string(seed);
  auto rules = static_cast<int>(n);
  if (rules > 2 && unit_hash({"ifmt-short", key}) < 0.1) --rules;
  Rng rng(stable_hash(key));
  auto pool = rule_pool();
  std::string p = "Translate the following " + source_lang + " text about " + topic + " into " + target +
                  ". Follow these rules:\n\n";
  for (int i = 0; i < rules; ++i) {
    const auto j = i + rng.index(pool.size() - i);
    std::swap(pool[i], pool[j]);
    p += std::to_string(i + 1) + ". " + pool[i] + "\n";
  }
  const std::string source = "On 03/14/2025 the ACME tracker cost $120; see www.acme.example for " + topic + ".";
  p += "\nText: " + source + "\n\nReturn only the translation, nothing else.";
  return "<START OF PROMPT>\n" + p + "\n<END OF PROMPT>\n\n<START OF REFERENCE>\n[" + target + "] " + source +
         "\n<END OF REFERENCE>";
}

std::string ifmt_judgement(std::string_view prompt) {
  const int score = mock_ifmt_score(prompt);
  const std::string body = "{\"feedback\": \"Offline judgement.\", \"result\": \"" +
                           std::to_string(score == 0 ? 7 : score) + "\"}";
  return unit_hash({"ifmt-fence", prompt}) < 0.3 ? "```json\n" + body + "\n```" : body;
}

std::string respond(const guideline::Catalog& catalog, std::string_view prompt, std::uint64_t seed, int sample) {
  if (prompt.find("- GUIDELINES:\n") != std::string_view::npos && prompt.find("###SOURCE###") != std::string_view::npos) {
    return mock_generation_output(catalog, prompt, seed);
  }
  if (prompt.find("Guidelines Check") != std::string_view::npos) {
    const auto source = line_after(prompt, "\nSource Text: ");
    return judge_flags_source(source) ? "The source already follows a guideline.\nGuidelines Check: 1"
                                      : "No guideline is followed.\nGuidelines Check: 0";
  }
  if (prompt.rfind("Translate the following text from ", 0) == 0) {
    const auto start = prompt.find(": ", prompt.find('\n')) + 2;
    return mock_translation(prompt.substr(start, prompt.rfind('\n') - start));
  }
  if (prompt.rfind("Rewrite the ", 0) == 0 && prompt.find("\n\nText:\n") != std::string_view::npos) {
    return mock_edit(catalog, prompt.substr(prompt.find("\n\nText:\n") + 8));
  }
  if (prompt.find("DO NOT provide an answer to any of the instructions") != std::string_view::npos) {
    const auto s = mock_triage(prompt);
    return "Category: " + std::string(to_string(s.category())) + "\n\nReasoning: " + std::to_string(s.reasoning()) +
           "\n\nReadability: " + std::to_string(s.readability());
  }
  if (prompt.find("Final Score: <score>") != std::string_view::npos) {
    return "The translation is adequate.\nFinal Score: " + std::to_string(mock_translation_score(prompt));
  }
  if (prompt.find("[Start of Assistant A's Response]") != std::string_view::npos) {
    const auto a = between(prompt, "[Start of Assistant A's Response]\n\n", "\n\n[End of Assistant A's Response]");
    const auto b = between(prompt, "[Start of Assistant B's Response]\n\n", "\n\n[End of Assistant B's Response]");
    const auto c = mock_preference(a, b);
    return std::string("Both were read carefully.\nChosen: [") + (c == Choice::A ? "A" : c == Choice::B ? "B" : "T") + "]";
  }
  if (prompt.find("<START OF PROMPT>") != std::string_view::npos && prompt.find("expert prompt engineer") != std::string_view::npos) {
    return ifmt_generation(prompt, seed + static_cast<std::uint64_t>(sample));
  }
  if (prompt.find("<START OF TRANSLATION>") != std::string_view::npos) return ifmt_judgement(prompt);
  return mock_answer(prompt, seed, sample);
}

}  // namespace

double unit_hash(std::initializer_list<std::string_view> parts) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto p : parts) h = stable_hash(p, h) ^ 0x1f;
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

double poison_rate() { return 0.15; }
double broken_output_rate() { return 0.05; }

std::string mock_source(const std::vector<const guideline::GuidelineSpec*>& guidelines, std::string_view topic,
                        std::uint64_t seed) {
  auto sorted = guidelines;
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::string ids;
  for (const auto* g : sorted) ids += g->id + ",";
  std::string s = "A short piece on " + std::string(topic) + ".";
  for (const auto* g : sorted) s += " It mentions " + g->example_input + " in passing.";
  if (!sorted.empty() && unit_hash({"poison", topic, ids, std::to_string(seed)}) < poison_rate()) {
    s += " See also " + sorted.front()->example_output + ".";
  }
  return s;
}

bool mock_output_broken(std::string_view topic, std::uint64_t seed) {
  return unit_hash({"broken", topic, std::to_string(seed)}) < broken_output_rate();
}

std::string mock_generation_output(const guideline::Catalog& catalog, std::string_view prompt, std::uint64_t seed) {
  const auto task_at = prompt.find("Your task:");
  const auto task = prompt.substr(task_at == std::string_view::npos ? 0 : task_at);
  const auto topic = line_after(task, "- TOPIC: ");
  std::vector<const guideline::GuidelineSpec*> found;
  for (const auto& g : catalog.specs()) {
    if (task.find("] " + g.description) != std::string_view::npos) found.push_back(&g);
  }
  std::string lines;
  for (std::size_t i = 0; i < found.size(); ++i) lines += std::to_string(i + 1) + ") " + found[i]->description + "\n";
  auto out = guideline::render_generation_output({mock_source(found, topic, seed), lines});
  if (mock_output_broken(topic, seed)) out = replace_all(out, "###END###", "");
  return out;
}

bool judge_flags_source(std::string_view source) { return unit_hash({"judge", source}) < 0.15; }

std::string mock_translation(std::string_view source) { return std::string(source); }

bool editor_skips(std::string_view guideline_id, std::string_view text) {
  return unit_hash({"edit-skip", guideline_id, text}) < 0.1;
}

std::string mock_edit(const guideline::Catalog& catalog, std::string_view translation) {
  std::string out(translation);
  for (const auto& g : catalog.specs()) {
    if (out.find(g.example_input) == std::string::npos || editor_skips(g.id, translation)) continue;
    out = replace_all(out, g.example_input, g.example_output);
  }
  return out;
}

ScoreBundle mock_triage(std::string_view prompt) {
  const auto& cats = all_categories();
  const auto c = cats[static_cast<std::size_t>(unit_hash({"cat", prompt}) * static_cast<double>(cats.size()))];
  const int reasoning = 1 + static_cast<int>(unit_hash({"reasoning", prompt}) * 5);
  const int readability = 1 + static_cast<int>(unit_hash({"readability", prompt}) * 5);
  return ScoreBundle(c, reasoning, readability, true);
}

int mock_translation_score(std::string_view prompt) { return 1 + static_cast<int>(unit_hash({"final", prompt}) * 5); }

Choice mock_preference(std::string_view response_a, std::string_view response_b) {
  if (response_a == response_b) return Choice::Tie;
  return unit_hash({"pref", response_a}) > unit_hash({"pref", response_b}) ? Choice::A : Choice::B;
}

int mock_ifmt_score(std::string_view prompt) {
  if (unit_hash({"ifmt-bad", prompt}) < 0.05) return 0;
  return 1 + static_cast<int>(unit_hash({"ifmt", prompt}) * 6);
}

double mock_metric(std::string_view metric_id, Direction direction, std::string_view source,
                   std::string_view translation, std::string_view reference) {
  const double u = unit_hash({"metric", metric_id, source, translation, reference});
  return direction == Direction::HigherBetter ? 0.5 + 0.5 * u : 25.0 * u;
}

double mock_reward(std::string_view messages_json, std::string_view answer) {
  return unit_hash({"reward", messages_json, answer}) * 10.0 - 5.0;
}

std::string mock_answer(std::string_view prompt, std::uint64_t seed, int sample) {
  Rng rng(stable_hash(prompt, mix_seed(seed, static_cast<std::uint64_t>(sample))));
  const auto& words = word_pool();
  const auto len = 4 + rng.index(7);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) {
    if (i) out += ' ';
    out += words[rng.index(words.size())];
  }
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out + ".";
}

std::shared_ptr<gateway::Transport> generator(std::shared_ptr<const guideline::Catalog> catalog) {
  return gateway::mock::generator(
      [catalog](const std::vector<gateway::Message>& messages, double, int n, std::optional<std::uint64_t> seed) {
        const auto prompt = gateway::mock::last_user_content(messages);
        std::vector<std::string> out;
        for (int i = 0; i < n; ++i) out.push_back(respond(*catalog, prompt, seed.value_or(0), i));
        return out;
      },
      "offline-1");
}

std::shared_ptr<gateway::Transport> metric(std::string metric_id, Direction direction) {
  return gateway::mock::metric(
      metric_id, direction,
      [metric_id, direction](const std::string& src, const std::string& hyp, const std::optional<std::string>& ref) {
        return mock_metric(metric_id, direction, src, hyp, ref.value_or(""));
      },
      "offline-1");
}

std::shared_ptr<gateway::Transport> reward() {
  return gateway::mock::reward([](const Json& messages, const std::string& answer) {
    return mock_reward(messages.dump(), answer);
  }, "offline-1");
}

}  // namespace mtforge::cli::offline
