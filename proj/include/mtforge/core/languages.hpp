#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mtforge/core/json.hpp"
#include "mtforge/core/types.hpp"

namespace mtforge {

// Display name for a known code ("de" -> "German", "pt_BR" -> "Portuguese (Brazil)").
std::optional<std::string> language_display_name(std::string_view code);

// Builds a tag from a known code; unknown codes fall back to the code itself as
// display name.
LanguageTag language_from_code(std::string_view code);

// Accepts either "pt_BR" or {"code": "pt_BR", "display_name": "..."}.
LanguageTag language_from_json(const Json& j);

}  // namespace mtforge
