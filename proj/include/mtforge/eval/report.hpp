#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtforge/core/json.hpp"
#include "mtforge/core/types.hpp"
#include "mtforge/eval/winrate.hpp"

namespace mtforge::eval {

// Groups are cumulative: each one averages its own languages plus those of
// every earlier group.
struct LanguageGroup {
  std::string name;
  std::vector<std::string> languages;  // added by this group
};

// The Avg-7 / Avg-15 / Avg-all split over the 23 WMT24++ target languages.
std::vector<LanguageGroup> default_language_groups();

// Names unique and non-empty, no language listed twice. ConfigInvalid.
void validate_groups(const std::vector<LanguageGroup>& groups);

struct GroupAverage {
  std::string name;
  std::vector<std::string> languages;  // cumulative
  std::optional<double> average;       // absent when some language has no score
  std::vector<std::string> missing;
};

// UnknownLanguageGroup when a scored language is in no group (checked only
// when groups are configured).
std::vector<GroupAverage> group_averages(const std::vector<std::pair<std::string, double>>& per_language,
                                         const std::vector<LanguageGroup>& groups);

struct InstanceResult {
  std::string id;
  std::string language;
  std::optional<int> if_score;
  std::optional<MetricScore> mt_score;
  std::optional<JudgeVerdict> verdict;
  std::optional<Outcome> outcome;
  std::string error;  // non-empty when the instance was excluded
};

Json to_json(const InstanceResult& r);

struct EvalReport {
  std::string system;
  std::string metric;
  std::vector<InstanceResult> per_instance;
  std::vector<std::pair<std::string, double>> per_language;
  std::vector<std::pair<std::string, double>> aggregates;
  std::size_t excluded = 0;
};

// Means of if_score and mt_score, win rate over outcomes, instance count.
// Instances with an error are excluded and counted.
void compute_aggregates(EvalReport& report, double tie_credit = 0.5);

enum class ReportLayout { PerLanguage, Summary };

ReportLayout parse_report_layout(std::string_view text);  // "per-language" | "summary"

struct RenderedReport {
  std::string text;
  Json json;
};

// `only_groups` restricts the group columns; an unknown name raises
// UnknownLanguageGroup.
RenderedReport emit_report(const EvalReport& report, const std::vector<LanguageGroup>& groups, ReportLayout layout,
                           const std::vector<std::string>& only_groups = {});

}  // namespace mtforge::eval
