#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mtforge/core/json.hpp"
#include "mtforge/core/types.hpp"
#include "mtforge/gateway/gateway.hpp"

namespace mtforge::eval {

struct IfMtAttributes {
  LanguageTag source_language{"en", "English"};
  LanguageTag target_language{"es", "Spanish"};
  std::string topic;
  std::string subtopic;
  std::string style;
  std::string source_length;
  int n_rules = 3;

  void validate() const;  // InvalidArgument
};

IfMtAttributes ifmt_attributes_from_json(const Json& j);

struct IfMtInstance {
  std::string id;
  std::string prompt;  // full request: source, rules, instruction
  int n_rules = 2;
  std::string reference;
  LanguageTag source_language{"en", "English"};
  LanguageTag target_language{"es", "Spanish"};

  void validate() const;  // InvalidArgument
};

Json to_json(const IfMtInstance& inst);
IfMtInstance ifmt_instance_from_json(const Json& j);

std::string build_ifmt_meta_prompt(const IfMtAttributes& attrs);

struct IfMtBlocks {
  std::string prompt;
  std::string reference;
};

// Extracts the prompt and reference blocks. MarkerMissing names the missing
// marker, or "ORDER" when the blocks are out of sequence; an empty block is a
// ParseFailure.
IfMtBlocks parse_ifmt_response(std::string_view response);

// Length of the first numbered list (1., 2., ... or 1), 2), ...) in the prompt;
// falls back to the first bullet list. 0 when there is no list.
int count_rules(std::string_view prompt);

struct IfMtGenerateOptions {
  std::string endpoint;
  double temperature = 0.7;
  std::optional<std::uint64_t> seed;
  bool strict = false;  // RuleCountMismatch is an error instead of a warning
};

struct IfMtGeneration {
  IfMtInstance instance;
  std::optional<std::string> warning;
};

IfMtGeneration generate_ifmt_instance(const IfMtAttributes& attrs, gateway::Gateway& gw,
                                      const IfMtGenerateOptions& opts, std::string id = "");

std::string build_ifmt_judge_prompt(std::string_view prompt, std::string_view translation);

struct IfMtJudgement {
  int score = 0;  // 1..6
  std::string feedback;
};

// JSON {"feedback","result"}; code fences and prose around the object are
// tolerated. ParseFailure on invalid JSON, a missing result, or a result
// outside 1..6.
IfMtJudgement parse_ifmt_judgement(std::string_view text);

IfMtJudgement judge_ifmt(const IfMtInstance& instance, std::string_view translation, gateway::Gateway& gw,
                         const std::string& judge_endpoint);

}  // namespace mtforge::eval
