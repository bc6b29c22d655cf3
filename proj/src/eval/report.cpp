#include "mtforge/eval/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>

#include "mtforge/core/error.hpp"

namespace mtforge::eval {

std::vector<LanguageGroup> default_language_groups() {
  return {
      {"Avg-7", {"pt_BR", "zh_CN", "fr_FR", "de_DE", "it_IT", "ru_RU", "es_MX"}},
      {"Avg-15", {"pt_PT", "zh_TW", "cs_CZ", "nl_NL", "hi_IN", "is_IS", "ja_JP", "ko_KR", "uk_UA"}},
      {"Avg-all", {"da_DK", "fi_FI", "hu_HU", "no_NO", "pl_PL", "ro_RO", "sv_SE"}},
  };
}

void validate_groups(const std::vector<LanguageGroup>& groups) {
  std::set<std::string> names, langs;
  for (const auto& g : groups) {
    require(!g.name.empty(), ErrorCode::ConfigInvalid, "language group with empty name");
    require(names.insert(g.name).second, ErrorCode::ConfigInvalid, "duplicate language group " + g.name);
    for (const auto& l : g.languages) {
      require(langs.insert(l).second, ErrorCode::ConfigInvalid, "language " + l + " listed in more than one group");
    }
  }
}

std::vector<GroupAverage> group_averages(const std::vector<std::pair<std::string, double>>& per_language,
                                         const std::vector<LanguageGroup>& groups) {
  validate_groups(groups);
  std::map<std::string, double, std::less<>> scores;
  for (const auto& [lang, score] : per_language) scores[lang] = score;
  if (!groups.empty()) {
    std::set<std::string, std::less<>> grouped;
    for (const auto& g : groups) grouped.insert(g.languages.begin(), g.languages.end());
    for (const auto& [lang, _] : per_language) {
      require(grouped.count(lang) > 0, ErrorCode::UnknownLanguageGroup, "language " + lang + " is in no group");
    }
  }
  std::vector<GroupAverage> out;
  std::vector<std::string> cumulative;
  for (const auto& g : groups) {
    cumulative.insert(cumulative.end(), g.languages.begin(), g.languages.end());
    GroupAverage avg{g.name, cumulative, std::nullopt, {}};
    double sum = 0;
    for (const auto& l : cumulative) {
      const auto it = scores.find(l);
      if (it == scores.end()) {
        avg.missing.push_back(l);
      } else {
        sum += it->second;
      }
    }
    if (avg.missing.empty() && !cumulative.empty()) avg.average = sum / static_cast<double>(cumulative.size());
    out.push_back(std::move(avg));
  }
  return out;
}

Json to_json(const InstanceResult& r) {
  Json j{{"id", r.id}};
  if (!r.language.empty()) j["lang"] = r.language;
  if (r.if_score) j["if_score"] = *r.if_score;
  if (r.mt_score) j["mt_score"] = Json(*r.mt_score);
  if (r.verdict) {
    j["verdict"] = {{"choice", r.verdict->choice == Choice::A ? "A" : r.verdict->choice == Choice::B ? "B" : "T"},
                    {"rationale", r.verdict->rationale}};
  }
  if (r.outcome) j["outcome"] = to_string(*r.outcome);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

void compute_aggregates(EvalReport& report, double tie_credit) {
  report.aggregates.clear();
  report.excluded = 0;
  double if_sum = 0, mt_sum = 0;
  std::size_t if_n = 0, mt_n = 0, used = 0;
  std::vector<Outcome> outcomes;
  for (const auto& r : report.per_instance) {
    if (!r.error.empty()) {
      ++report.excluded;
      continue;
    }
    ++used;
    if (r.if_score) {
      if_sum += *r.if_score;
      ++if_n;
    }
    if (r.mt_score) {
      mt_sum += r.mt_score->value;
      ++mt_n;
    }
    if (r.outcome) outcomes.push_back(*r.outcome);
  }
  report.aggregates.emplace_back("instances", static_cast<double>(used));
  if (if_n) report.aggregates.emplace_back("if_mean", if_sum / static_cast<double>(if_n));
  if (mt_n) report.aggregates.emplace_back("mt_mean", mt_sum / static_cast<double>(mt_n));
  if (!outcomes.empty()) report.aggregates.emplace_back("win_rate", win_rate(outcomes, tie_credit));
}

ReportLayout parse_report_layout(std::string_view text) {
  if (text == "per-language") return ReportLayout::PerLanguage;
  if (text == "summary") return ReportLayout::Summary;
  fail(ErrorCode::InvalidArgument, "report layout must be per-language or summary, got " + std::string(text));
}

RenderedReport emit_report(const EvalReport& report, const std::vector<LanguageGroup>& groups, ReportLayout layout,
                           const std::vector<std::string>& only_groups) {
  auto averages = group_averages(report.per_language, groups);
  if (!only_groups.empty()) {
    for (const auto& name : only_groups) {
      const bool known = std::any_of(averages.begin(), averages.end(), [&](const auto& a) { return a.name == name; });
      require(known, ErrorCode::UnknownLanguageGroup, "unknown language group " + name);
    }
    std::erase_if(averages, [&](const GroupAverage& a) {
      return std::find(only_groups.begin(), only_groups.end(), a.name) == only_groups.end();
    });
  }

  RenderedReport out;
  Json per_lang = Json::array();
  for (const auto& [lang, score] : report.per_language) per_lang.push_back({{"lang", lang}, {"score", score}});
  Json group_json = Json::array();
  for (const auto& a : averages) {
    Json g{{"name", a.name}, {"languages", a.languages}};
    g["average"] = a.average ? Json(*a.average) : Json(nullptr);
    if (!a.missing.empty()) g["missing"] = a.missing;
    group_json.push_back(std::move(g));
  }
  Json aggregates = Json::object();
  for (const auto& [name, value] : report.aggregates) aggregates[name] = value;
  out.json = {{"system", report.system}, {"metric", report.metric},     {"layout", layout == ReportLayout::PerLanguage ? "per-language" : "summary"},
              {"groups", group_json},    {"aggregates", aggregates},    {"excluded", report.excluded}};
  if (layout == ReportLayout::PerLanguage) out.json["per_language"] = per_lang;

  const auto cell = [](const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : std::string("-"); };
  std::string text;
  if (layout == ReportLayout::PerLanguage) {
    std::vector<std::string> header{"System"}, row{report.system.empty() ? "-" : report.system};
    for (const auto& a : averages) {
      header.push_back(a.name);
      row.push_back(cell(a.average));
    }
    for (const auto& [lang, score] : report.per_language) {
      header.push_back(lang);
      row.push_back(cell(score));
    }
    std::string top, bottom;
    for (std::size_t i = 0; i < header.size(); ++i) {
      const auto width = std::max(header[i].size(), row[i].size());
      const auto sep = i + 1 < header.size() ? "  " : "";
      top += fmt::format("{:<{}}{}", header[i], width, sep);
      bottom += fmt::format("{:<{}}{}", row[i], width, sep);
    }
    const auto rstrip = [](std::string& s) { s.erase(s.find_last_not_of(' ') + 1); };
    rstrip(top);
    rstrip(bottom);
    text = top + "\n" + bottom + "\n";
  } else {
    text = fmt::format("system: {}\nmetric: {}\n", report.system, report.metric);
    for (const auto& a : averages) {
      text += fmt::format("{}: {} ({} languages{})\n", a.name, cell(a.average), a.languages.size(),
                          a.missing.empty() ? "" : fmt::format(", {} missing", a.missing.size()));
    }
    for (const auto& [name, value] : report.aggregates) text += fmt::format("{}: {:.4f}\n", name, value);
    text += fmt::format("excluded: {}\n", report.excluded);
  }
  out.text = std::move(text);
  return out;
}

}  // namespace mtforge::eval
