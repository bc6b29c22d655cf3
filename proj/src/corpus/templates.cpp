#include "mtforge/corpus/templates.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::corpus {

namespace {

constexpr std::array<std::string_view, 4> kSlots = {"source", "target", "lp0", "lp1"};

struct Piece {
  bool is_slot;
  std::string_view text;  // literal text or slot name
};

std::vector<Piece> tokenize(std::string_view text) {
  std::vector<Piece> pieces;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      pieces.push_back({false, text.substr(pos)});
      break;
    }
    if (open > pos) pieces.push_back({false, text.substr(pos, open - pos)});
    const std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) fail(ErrorCode::InvalidArgument, "unterminated '{{' in template");
    const std::string_view name = trim(text.substr(open + 2, close - open - 2));
    if (std::find(kSlots.begin(), kSlots.end(), name) == kSlots.end()) {
      fail(ErrorCode::InvalidArgument, "unknown placeholder '" + std::string(name) + "'");
    }
    pieces.push_back({true, name});
    pos = close + 2;
  }
  return pieces;
}

void check_slots(std::string_view text) {
  std::set<std::string_view> seen;
  for (const Piece& p : tokenize(text)) {
    if (p.is_slot) seen.insert(p.text);
  }
  std::string missing;
  for (std::string_view slot : kSlots) {
    if (!seen.contains(slot)) missing += (missing.empty() ? "" : ",") + std::string(slot);
  }
  if (!missing.empty()) fail(ErrorCode::PlaceholderMissing, missing);
}

}  // namespace

std::string render_template(std::string_view text, const ParallelPair& pair) {
  std::string out;
  for (const Piece& p : tokenize(text)) {
    if (!p.is_slot) {
      out += p.text;
    } else if (p.text == "source") {
      out += pair.source;
    } else if (p.text == "target") {
      out += pair.target;
    } else if (p.text == "lp0") {
      out += pair.lp0.display_name();
    } else {
      out += pair.lp1.display_name();
    }
  }
  return out;
}

TemplateRegistry TemplateRegistry::builtin() {
  TemplateRegistry r;
  r.add("translate_source_from",
        "Source: {{ source }}\nTranslate the source text from {{ lp0 }} to {{ lp1 }}.\nTarget: {{ target }}");
  r.add("translate_from", "Source: {{ source }}\nTranslate from {{ lp0 }} to {{ lp1 }}.\nTarget: {{ target }}");
  r.add("write_text_in", "Write the text in {{ lp0 }} in {{ lp1 }}.\nText: {{ source }}\nTarget: {{ target }}");
  r.add("translate_following_text",
        "Translate the following text from {{ lp0 }} to {{ lp1 }}:\nText: {{ source }}\nTranslation: {{ target }}");
  r.add("translate_following_source",
        "Translate the following {{ lp0 }} source text to {{ lp1 }}:\n{{ lp0 }}: {{ source }}\n{{ lp1 }}: {{ target }}");
  r.add("please_translate",
        "Please translate this text from {{ lp0 }} into {{ lp1 }}.\n{{ lp0 }}: {{ source }}\n{{ lp1 }}: {{ target }}");
  r.add("make_translation",
        "Make a translation of the given text from {{ lp0 }} to {{ lp1 }}.\n{{ lp0 }}: {{ source }}\n{{ lp1 }}: "
        "{{ target }}");
  r.add("text_above_into", "{{ lp0 }}: {{ source }}\nTranslate the {{ lp0 }} text above into {{ lp1 }}.\n{{ target }}");
  return r;
}

void TemplateRegistry::add(std::string id, std::string text) {
  require(!id.empty(), ErrorCode::InvalidArgument, "template id is empty");
  check_slots(text);
  templates_[std::move(id)] = std::move(text);
}

void TemplateRegistry::load_directory(const std::filesystem::path& dir) {
  require(std::filesystem::is_directory(dir), ErrorCode::ConfigInvalid,
          "template directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    try {
      add(path.stem().string(), std::move(text));
    } catch (const Error& e) {
      fail(e.code(), path.filename().string() + ": " + e.detail());
    }
  }
}

bool TemplateRegistry::contains(std::string_view id) const { return templates_.find(id) != templates_.end(); }

std::vector<std::string> TemplateRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, text] : templates_) out.push_back(id);
  return out;
}

const std::string& TemplateRegistry::text(std::string_view id) const {
  const auto it = templates_.find(id);
  if (it == templates_.end()) fail(ErrorCode::UnknownTemplate, std::string(id));
  return it->second;
}

std::string TemplateRegistry::render(const ParallelPair& pair, std::string_view id) const {
  return render_template(text(id), pair);
}

}  // namespace mtforge::corpus
