#pragma once

#include <string>

#include "mtforge/core/json.hpp"
#include "mtforge/core/types.hpp"

namespace mtforge::corpus {

struct ParallelPair {
  std::string source;
  std::string target;
  LanguageTag lp0;  // source language
  LanguageTag lp1;  // target language
  std::string provenance;

  // Throws InvalidArgument on empty text or lp0 == lp1.
  void validate() const;
};

// JSONL line shape: {"source","target","lp0","lp1","provenance"}; languages
// are codes or {code, display_name} objects.
ParallelPair pair_from_json(const Json& j);
Json to_json(const ParallelPair& p);

}  // namespace mtforge::corpus
