#include "mtforge/prefs/ingest.hpp"

#include "mtforge/core/error.hpp"

namespace mtforge::prefs {

std::vector<PreferencePair> ingest_post_edits(std::span<const PostEditRecord> records) {
  std::vector<PreferencePair> out;
  for (const auto& r : records) {
    if (r.edited == r.original || r.edited.empty() || r.original.empty()) continue;
    out.push_back({r.id, r.prompt, r.edited, r.original, Provenance::PostEdit, {}});
  }
  return out;
}

std::vector<PreferencePair> ingest_annotations(std::span<const AnnotationRecord> records) {
  std::vector<PreferencePair> out;
  for (const auto& r : records) {
    if (r.preferred == Choice::Tie || r.response_a == r.response_b) continue;
    if (r.response_a.empty() || r.response_b.empty()) continue;
    const bool a_wins = r.preferred == Choice::A;
    out.push_back({r.id, r.prompt, a_wins ? r.response_a : r.response_b, a_wins ? r.response_b : r.response_a,
                   Provenance::Annotation, {}});
  }
  return out;
}

namespace {

Conversation prompt_of(const Json& j) {
  try {
    return field(j, "prompt").get<Conversation>();
  } catch (const Error& e) {
    fail(ErrorCode::DataError, "prompt: " + e.detail());
  } catch (const Json::exception& e) {
    fail(ErrorCode::DataError, std::string("prompt: ") + e.what());
  }
}

}  // namespace

PostEditRecord post_edit_from_json(const Json& j) {
  return {optional_string_field(j, "id").value_or(""), prompt_of(j), string_field(j, "original"),
          string_field(j, "edited")};
}

AnnotationRecord annotation_from_json(const Json& j) {
  Choice preferred;
  try {
    preferred = parse_choice(string_field(j, "preferred"));
  } catch (const Error& e) {
    fail(ErrorCode::DataError, "preferred: " + e.detail());
  }
  return {optional_string_field(j, "id").value_or(""), prompt_of(j), string_field(j, "response_a"),
          string_field(j, "response_b"), preferred};
}

}  // namespace mtforge::prefs
