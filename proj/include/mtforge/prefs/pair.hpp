#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtforge/core/json.hpp"
#include "mtforge/core/types.hpp"

namespace mtforge::prefs {

enum class Provenance { MBR, PostEdit, Annotation, OnPolicy, OffPolicy };

std::string to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

struct Check {
  std::string checker_id;  // "metric:<id>" or "judge:<endpoint>"
  bool passed = false;
  friend bool operator==(const Check&, const Check&) = default;
};

struct PreferencePair {
  std::string id;
  Conversation prompt;
  std::string chosen;
  std::string rejected;
  Provenance provenance = Provenance::MBR;
  std::vector<Check> checks;

  // chosen != rejected, both non-empty, every check passed.
  void validate() const;
};

Json to_json(const PreferencePair& p);
PreferencePair preference_pair_from_json(const Json& j);

}  // namespace mtforge::prefs
