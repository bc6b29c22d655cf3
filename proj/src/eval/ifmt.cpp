#include "mtforge/eval/ifmt.hpp"

#include <array>
#include <cmath>
#include <map>
#include <regex>

#include "mtforge/core/error.hpp"
#include "mtforge/core/languages.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::eval {
namespace {

constexpr const char* kMetaPrompt = R"P(As an expert prompt engineer, create a detailed prompt for a language model to perform the following task: translation of a source text, given a set of ${n_rules} rules. The source text should abide by the followin parameters:
- Source language: ${source_language}
- Topic: ${topic}
- Subtopic: ${subtopic}
- Style: ${style}
- Source length: ${source_length}

The translation should be in ${target_language}, and your generated prompt must specify a set of ${n_rules} rules.

IMPORTANT: These rules must be objectively verifiable and should be clearly stated in the prompt. The language model should be instructed to follow these rules when translating the source text. An example of a verifiable rule is "Convert dates to the format DD/MM/YYYY."; an example of an unverifiable rule is "Make the translation sound more professional.". Keep in mind that the rules should make sense in the context of the source text and the target language.

IMPORTANT: Make sure that the source you create has elements that correspond to the rules you set.

To demonstrate the expected output, also provide a reference translation following the requested requirements at the end.

IMPORTANT: Your response should be structured as follows:

<START OF PROMPT>
[INSERT ONLY THE PROMPT HERE COMBINING SOURCE, RULES, AND AN INSTRUCTION. REMIND THE MODEL TO RETURN ONLY THE TRANSLATION. NOTHING ELSE.]
<END OF PROMPT>

<START OF REFERENCE>
[INSERT ONLY THE REFERENCE TRANSLATION. NOTHING ELSE.]
<END OF REFERENCE>

ABIDE STRICTLY BY THE REQUESTED FORMAT.)P";

constexpr const char* kJudgePrompt = R"P(You are an expert judge evaluating translation quality. You will be presented with:

- A text, prompting a model for a translation of a source following some rules
- A translation to evaluate

Rate the translation on a scale of 1-6 based on how well it follows the specified rules and instructions in the prompt, regardless of overall translation quality, according to the following criteria:
- Rule Adherence: Does the translation follow all explicit rules stated in the prompt?
- Instruction Compliance: Are specific formatting, style, or technical instructions followed?
- Constraint Observance: Are any limitations or restrictions properly respected?
- Specification Accuracy: Does the output match the exact specifications requested?
- Requirement Fulfillment: Are all mandatory elements present as instructed?

Scoring Rubric:
6 - Perfect Compliance

- Follows every single rule and instruction precisely
- No deviations from any specified constraints
- All requirements fully met as requested
- Complete adherence to formatting/style directives
- Perfect execution of all procedural instructions
- Zero rule violations of any kind

5 - Excellent Compliance

- Follows nearly all rules with only trivial deviations
- Minor lapses that don't affect core requirements
- Strong adherence to most constraints and directives
- Formatting/style mostly correct
- Very few rule violations, all inconsequential

4 - Good Compliance
- Follows most important rules correctly
- Some minor rule violations that don't undermine main objectives
- Generally respects constraints and limitations
- Adequate adherence to formatting requirements
- Few significant rule violations

3 - Fair Compliance
- Follows some rules but misses several others
- Notable violations of stated constraints
- Inconsistent adherence to instructions
- Some formatting/style requirements ignored
- Multiple rule violations affecting compliance

2 - Poor Compliance
- Fails to follow many stated rules
- Significant violations of constraints and limitations
- Poor adherence to specific instructions
- Formatting/style requirements largely ignored
- Frequent and notable rule violations

1 - No Compliance
- Ignores most or all stated rules
- Complete disregard for constraints and limitations
- Fails to follow basic instructions
- No attention to specified requirements
- Systematic rule violations throughout

Provide your evaluation in this JSON format:

{"feedback": "<detailed explanation of the score based on the criteria>", "result": "<only a number from 1 to 6>"}

<START OF SOURCE TEXT>
${prompt}
<END OF SOURCE TEXT>

<START OF TRANSLATION>
${answer}
<END OF TRANSLATION>

You may proceed to evaluate the translation. Focus on evaluating the extent to which the translation follows the rules in the prompt, not its quality. Ensure the output is valid JSON, without additional formatting or explanations.)P";

// Single pass, so values containing "${...}" are left alone.
std::string substitute(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const auto open = tmpl.find("${", i);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find('}', open);
    require(close != std::string_view::npos, ErrorCode::InvalidArgument, "unterminated placeholder");
    out.append(tmpl.substr(i, open - i));
    const auto name = tmpl.substr(open + 2, close - open - 2);
    const auto it = values.find(name);
    require(it != values.end(), ErrorCode::PlaceholderMissing, std::string(name));
    out += it->second;
    i = close + 1;
  }
  out.append(tmpl.substr(i));
  return out;
}

const std::regex& numbered_item() {
  static const std::regex re(R"(^\s*(\d+)[.)]\s+\S.*)");
  return re;
}

const std::regex& bullet_item() {
  static const std::regex re("^\\s*([-*]|\xE2\x80\xA2)\\s+\\S.*");
  return re;
}

std::string strip_fences(std::string_view text) {
  auto t = trim(text);
  if (t.substr(0, 3) == "```") {
    const auto nl = t.find('\n');
    t = nl == std::string_view::npos ? std::string_view{} : t.substr(nl + 1);
    const auto close = t.rfind("```");
    if (close != std::string_view::npos) t = t.substr(0, close);
  }
  return std::string(trim(t));
}

int coerce_result(const Json& r) {
  if (r.is_number_integer()) return r.get<int>();
  if (r.is_number_float()) {
    const double v = r.get<double>();
    if (std::floor(v) == v && std::abs(v) < 1e6) return static_cast<int>(v);
    fail(ErrorCode::ParseFailure, "result is not an integer");
  }
  if (r.is_string()) {
    const auto v = parse_int(trim(r.get<std::string>()));
    require(v.has_value() && std::abs(*v) < 1000000, ErrorCode::ParseFailure,
            "result is not an integer: " + r.get<std::string>());
    return static_cast<int>(*v);
  }
  fail(ErrorCode::ParseFailure, "result has unsupported type");
}

}  // namespace

void IfMtAttributes::validate() const {
  require(n_rules >= 2 && n_rules <= 4, ErrorCode::InvalidArgument, "n_rules must be in 2..4");
  require(!topic.empty() && !subtopic.empty(), ErrorCode::InvalidArgument, "topic and subtopic are required");
  require(!style.empty() && !source_length.empty(), ErrorCode::InvalidArgument, "style and source_length are required");
}

IfMtAttributes ifmt_attributes_from_json(const Json& j) {
  IfMtAttributes a;
  a.source_language = language_from_json(field(j, "source_language"));
  a.target_language = language_from_json(field(j, "target_language"));
  a.topic = string_field(j, "topic");
  a.subtopic = string_field(j, "subtopic");
  a.style = string_field(j, "style");
  a.source_length = string_field(j, "source_length");
  const auto& n = field(j, "n_rules");
  require(n.is_number_integer(), ErrorCode::DataError, "n_rules must be an integer");
  a.n_rules = n.get<int>();
  try {
    a.validate();
  } catch (const Error& e) {
    fail(ErrorCode::DataError, e.detail());
  }
  return a;
}

void IfMtInstance::validate() const {
  require(n_rules >= 2 && n_rules <= 4, ErrorCode::InvalidArgument, "n_rules must be in 2..4");
  require(!prompt.empty() && !reference.empty(), ErrorCode::InvalidArgument, "prompt and reference must be non-empty");
}

Json to_json(const IfMtInstance& inst) {
  return Json{{"id", inst.id},
              {"prompt", inst.prompt},
              {"n_rules", inst.n_rules},
              {"reference", inst.reference},
              {"source_lang", inst.source_language.code()},
              {"target_lang", inst.target_language.code()}};
}

IfMtInstance ifmt_instance_from_json(const Json& j) {
  IfMtInstance inst;
  inst.id = string_field(j, "id");
  inst.prompt = string_field(j, "prompt");
  inst.reference = string_field(j, "reference");
  const auto& n = field(j, "n_rules");
  require(n.is_number_integer(), ErrorCode::DataError, "n_rules must be an integer");
  inst.n_rules = n.get<int>();
  inst.source_language = language_from_json(field(j, "source_lang"));
  inst.target_language = language_from_json(field(j, "target_lang"));
  try {
    inst.validate();
  } catch (const Error& e) {
    fail(ErrorCode::DataError, e.detail());
  }
  return inst;
}

std::string build_ifmt_meta_prompt(const IfMtAttributes& attrs) {
  attrs.validate();
  return substitute(kMetaPrompt, {{"n_rules", std::to_string(attrs.n_rules)},
                                  {"source_language", attrs.source_language.display_name()},
                                  {"target_language", attrs.target_language.display_name()},
                                  {"topic", attrs.topic},
                                  {"subtopic", attrs.subtopic},
                                  {"style", attrs.style},
                                  {"source_length", attrs.source_length}});
}

IfMtBlocks parse_ifmt_response(std::string_view response) {
  static const std::array<std::string_view, 4> kMarkers = {"<START OF PROMPT>", "<END OF PROMPT>",
                                                            "<START OF REFERENCE>", "<END OF REFERENCE>"};
  std::array<std::size_t, 4> pos{};
  for (std::size_t k = 0; k < kMarkers.size(); ++k) {
    pos[k] = find_icase(response, kMarkers[k]);
    require(pos[k] != std::string_view::npos, ErrorCode::MarkerMissing, std::string(kMarkers[k]));
  }
  // Each END must follow its START, and the reference block the prompt block.
  for (std::size_t k = 1; k < kMarkers.size(); ++k) {
    if (pos[k] < pos[k - 1] + kMarkers[k - 1].size()) {
      // A later occurrence may still be in order (e.g. the model restated a marker).
      const auto again = find_icase(response, kMarkers[k], pos[k - 1] + kMarkers[k - 1].size());
      require(again != std::string_view::npos, ErrorCode::MarkerMissing, "ORDER");
      pos[k] = again;
    }
  }
  IfMtBlocks b;
  const auto block = [&](std::size_t start, std::size_t end) {
    const auto from = pos[start] + kMarkers[start].size();
    return std::string(trim(response.substr(from, pos[end] - from)));
  };
  b.prompt = block(0, 1);
  b.reference = block(2, 3);
  require(!b.prompt.empty(), ErrorCode::ParseFailure, "empty prompt block");
  require(!b.reference.empty(), ErrorCode::ParseFailure, "empty reference block");
  return b;
}

int count_rules(std::string_view prompt) {
  const auto lines = split_lines(prompt);
  std::smatch m;
  int expected = 1;
  bool in_list = false;
  for (const auto line_view : lines) {
    const std::string line(line_view);
    if (trim(line).empty()) continue;
    if (std::regex_match(line, m, numbered_item()) && parse_int(m[1].str()) == expected) {
      in_list = true;
      ++expected;
      continue;
    }
    if (in_list) break;
  }
  if (expected > 1) return expected - 1;
  int bullets = 0;
  for (const auto line_view : lines) {
    const std::string line(line_view);
    if (trim(line).empty()) continue;
    if (std::regex_match(line, bullet_item())) {
      ++bullets;
    } else if (bullets > 0) {
      break;
    }
  }
  return bullets;
}

IfMtGeneration generate_ifmt_instance(const IfMtAttributes& attrs, gateway::Gateway& gw,
                                      const IfMtGenerateOptions& opts, std::string id) {
  gateway::GenerationRequest req;
  req.endpoint_id = opts.endpoint;
  req.prompt_messages = {{"user", build_ifmt_meta_prompt(attrs)}};
  req.temperature = opts.temperature;
  req.seed = opts.seed;
  const auto response = gw.generate(req).at(0);
  const auto blocks = parse_ifmt_response(response);
  IfMtGeneration g{IfMtInstance{std::move(id), blocks.prompt, attrs.n_rules, blocks.reference, attrs.source_language,
                                attrs.target_language},
                   std::nullopt};
  const int found = count_rules(blocks.prompt);
  if (found != attrs.n_rules) {
    const auto msg = "expected " + std::to_string(attrs.n_rules) + " rules, found " + std::to_string(found);
    require(!opts.strict, ErrorCode::RuleCountMismatch, msg);
    g.warning = "RuleCountMismatch: " + msg;
  }
  return g;
}

std::string build_ifmt_judge_prompt(std::string_view prompt, std::string_view translation) {
  return substitute(kJudgePrompt, {{"prompt", std::string(prompt)}, {"answer", std::string(translation)}});
}

IfMtJudgement parse_ifmt_judgement(std::string_view text) {
  auto body = strip_fences(text);
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error&) {
    const auto open = body.find('{');
    const auto close = body.rfind('}');
    require(open != std::string::npos && close != std::string::npos && close > open, ErrorCode::ParseFailure,
            "no JSON object in judge output");
    try {
      j = Json::parse(body.substr(open, close - open + 1));
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::ParseFailure, std::string("invalid JSON: ") + e.what());
    }
  }
  require(j.is_object(), ErrorCode::ParseFailure, "judge output is not a JSON object");
  require(j.contains("result"), ErrorCode::ParseFailure, "missing result");
  IfMtJudgement out;
  out.score = coerce_result(j["result"]);
  require(out.score >= 1 && out.score <= 6, ErrorCode::ParseFailure, "result out of range: " + std::to_string(out.score));
  if (j.contains("feedback") && j["feedback"].is_string()) out.feedback = j["feedback"].get<std::string>();
  return out;
}

IfMtJudgement judge_ifmt(const IfMtInstance& instance, std::string_view translation, gateway::Gateway& gw,
                         const std::string& judge_endpoint) {
  return parse_ifmt_judgement(gw.complete(judge_endpoint, build_ifmt_judge_prompt(instance.prompt, translation)));
}

}  // namespace mtforge::eval
