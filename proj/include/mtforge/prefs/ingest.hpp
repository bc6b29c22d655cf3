#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtforge/prefs/pair.hpp"

namespace mtforge::prefs {

struct PostEditRecord {
  std::string id;
  Conversation prompt;
  std::string original;
  std::string edited;
};

// chosen = edited, rejected = original. No-op and empty edits are dropped.
std::vector<PreferencePair> ingest_post_edits(std::span<const PostEditRecord> records);

struct AnnotationRecord {
  std::string id;
  Conversation prompt;
  std::string response_a;
  std::string response_b;
  Choice preferred = Choice::Tie;
};

// Ties and identical responses are dropped.
std::vector<PreferencePair> ingest_annotations(std::span<const AnnotationRecord> records);

PostEditRecord post_edit_from_json(const Json& j);
AnnotationRecord annotation_from_json(const Json& j);

}  // namespace mtforge::prefs
