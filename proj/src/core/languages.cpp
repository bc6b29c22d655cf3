#include "mtforge/core/languages.hpp"

#include <map>

#include "mtforge/core/error.hpp"

namespace mtforge {

namespace {

const std::map<std::string, std::string, std::less<>>& known_languages() {
  static const std::map<std::string, std::string, std::less<>> kNames = {
      {"ar", "Arabic"},        {"bg", "Bulgarian"},   {"ca", "Catalan"},
      {"cs", "Czech"},         {"cs_CZ", "Czech"},    {"da", "Danish"},
      {"da_DK", "Danish"},     {"de", "German"},      {"de_DE", "German"},
      {"el", "Greek"},         {"en", "English"},     {"es", "Spanish"},
      {"es_MX", "Spanish (Mexico)"},                  {"et", "Estonian"},
      {"fi", "Finnish"},       {"fi_FI", "Finnish"},  {"fr", "French"},
      {"fr_FR", "French"},     {"gl", "Galician"},    {"hi", "Hindi"},
      {"hi_IN", "Hindi"},      {"hr", "Croatian"},    {"hu", "Hungarian"},
      {"hu_HU", "Hungarian"},  {"is", "Icelandic"},   {"is_IS", "Icelandic"},
      {"it", "Italian"},       {"it_IT", "Italian"},  {"ja", "Japanese"},
      {"ja_JP", "Japanese"},   {"ko", "Korean"},      {"ko_KR", "Korean"},
      {"nl", "Dutch"},         {"nl_NL", "Dutch"},    {"no", "Norwegian"},
      {"no_NO", "Norwegian"},  {"pl", "Polish"},      {"pl_PL", "Polish"},
      {"pt", "Portuguese"},    {"pt_BR", "Portuguese (Brazil)"},
      {"pt_PT", "Portuguese (Portugal)"},             {"ro", "Romanian"},
      {"ro_RO", "Romanian"},   {"ru", "Russian"},     {"ru_RU", "Russian"},
      {"sk", "Slovak"},        {"sv", "Swedish"},     {"sv_SE", "Swedish"},
      {"tr", "Turkish"},       {"uk", "Ukrainian"},   {"uk_UA", "Ukrainian"},
      {"zh", "Chinese"},       {"zh_CN", "Chinese (Simplified)"},
      {"zh_TW", "Chinese (Traditional)"},
  };
  return kNames;
}

}  // namespace

std::optional<std::string> language_display_name(std::string_view code) {
  const auto& names = known_languages();
  if (const auto it = names.find(code); it != names.end()) return it->second;
  return std::nullopt;
}

LanguageTag language_from_code(std::string_view code) {
  return LanguageTag(std::string(code), language_display_name(code).value_or(std::string(code)));
}

LanguageTag language_from_json(const Json& j) {
  if (j.is_string()) return language_from_code(j.get<std::string>());
  if (j.is_object()) {
    const std::string code = string_field(j, "code");
    return LanguageTag(code, optional_string_field(j, "display_name")
                                 .value_or(language_display_name(code).value_or(code)));
  }
  fail(ErrorCode::DataError, "language must be a code string or {code, display_name}");
}

}  // namespace mtforge
