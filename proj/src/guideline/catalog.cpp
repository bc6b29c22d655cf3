#include "mtforge/guideline/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::guideline {

std::regex compile_verification_regex(const std::string& pattern) {
  for (std::size_t i = 0; i + 1 < pattern.size(); ++i) {
    if (pattern[i] != '\\') continue;
    const char next = pattern[i + 1];
    if ((next >= '1' && next <= '9') || next == 'k') {
      fail(ErrorCode::RegexCompileError, "backreferences are not supported: " + pattern);
    }
    ++i;  // skip the escaped character
  }
  try {
    return std::regex(pattern, std::regex::ECMAScript | std::regex::optimize);
  } catch (const std::regex_error& e) {
    fail(ErrorCode::RegexCompileError, pattern + ": " + e.what());
  }
}

void GuidelineSpec::compile() {
  require(!id.empty(), ErrorCode::CatalogInvalid, "guideline without ID");
  require(!category.empty(), ErrorCode::CatalogInvalid, id + ": empty CATEGORY");
  require(!description.empty(), ErrorCode::CatalogInvalid, id + ": empty DESCRIPTION");
  auto re = std::make_shared<const std::regex>(compile_verification_regex(verification_regex));
  if (!std::regex_search(example_output, *re)) {
    fail(ErrorCode::CatalogInvalid, id + ": EXAMPLE_OUTPUT does not match VERIFICATION");
  }
  if (std::regex_search(example_input, *re)) {
    fail(ErrorCode::CatalogInvalid, id + ": EXAMPLE_INPUT already matches VERIFICATION");
  }
  compiled = std::move(re);
}

bool GuidelineSpec::matches(std::string_view text) const {
  require(compiled != nullptr, ErrorCode::PreconditionViolation, id + ": regex not compiled");
  return std::regex_search(text.begin(), text.end(), *compiled);
}

namespace {

bool parse_bool(std::string_view value, const std::string& origin) {
  const auto v = to_lower(trim(value));
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail(ErrorCode::CatalogInvalid, origin + ": REQUIRES_EXAMPLE must be true or false");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::CatalogInvalid, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

GuidelineSpec parse_guideline_spec(std::string_view text, const std::string& origin) {
  static const std::set<std::string, std::less<>> kKeys = {
      "ID", "CATEGORY", "NAME", "DESCRIPTION", "REQUIRES_EXAMPLE", "VERIFICATION", "EXAMPLE_INPUT", "EXAMPLE_OUTPUT"};
  std::map<std::string, std::string, std::less<>> values;
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto colon = line.find(':');
    const auto where = origin + ":" + std::to_string(line_no);
    require(colon != std::string_view::npos, ErrorCode::CatalogInvalid, where + ": expected KEY: value");
    const std::string key(trim(line.substr(0, colon)));
    require(kKeys.count(key) == 1, ErrorCode::CatalogInvalid, where + ": unknown key " + key);
    require(values.count(key) == 0, ErrorCode::CatalogInvalid, where + ": duplicate key " + key);
    // Only a single separating space is dropped so regexes keep their edges.
    auto value = line.substr(colon + 1);
    if (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    values[key] = key == "VERIFICATION" ? std::string(value) : std::string(trim(value));
  }
  for (const auto& key : kKeys) {
    require(values.count(key) == 1, ErrorCode::CatalogInvalid, origin + ": missing key " + key);
  }
  GuidelineSpec spec;
  spec.id = values["ID"];
  spec.category = values["CATEGORY"];
  spec.name = values["NAME"];
  spec.description = values["DESCRIPTION"];
  spec.requires_example = parse_bool(values["REQUIRES_EXAMPLE"], origin);
  spec.verification_regex = values["VERIFICATION"];
  spec.example_input = values["EXAMPLE_INPUT"];
  spec.example_output = values["EXAMPLE_OUTPUT"];
  spec.compile();
  return spec;
}

Catalog Catalog::load_directory(const std::filesystem::path& dir) {
  require(std::filesystem::is_directory(dir), ErrorCode::CatalogInvalid, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".spec") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<GuidelineSpec> specs;
  for (const auto& f : files) specs.push_back(parse_guideline_spec(read_file(f), f.filename().string()));
  std::sort(specs.begin(), specs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  Catalog catalog;
  for (auto& s : specs) catalog.add(std::move(s));
  require(!catalog.empty(), ErrorCode::CatalogInvalid, "no .spec files in " + dir.string());
  return catalog;
}

void Catalog::add(GuidelineSpec spec) {
  if (!spec.compiled) spec.compile();
  require(by_id_.count(spec.id) == 0, ErrorCode::CatalogInvalid, "duplicate guideline id " + spec.id);
  by_id_.emplace(spec.id, specs_.size());
  specs_.push_back(std::move(spec));
}

const GuidelineSpec* Catalog::find(std::string_view id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &specs_[it->second];
}

const GuidelineSpec& Catalog::at(std::string_view id) const {
  const auto* spec = find(id);
  if (spec == nullptr) fail(ErrorCode::InvalidArgument, "unknown guideline id " + std::string(id));
  return *spec;
}

std::vector<std::string> Catalog::categories() const {
  std::set<std::string> seen;
  for (const auto& s : specs_) seen.insert(s.category);
  return {seen.begin(), seen.end()};
}

std::vector<const GuidelineSpec*> Catalog::in_category(std::string_view category) const {
  std::vector<const GuidelineSpec*> out;
  for (const auto& s : specs_) {
    if (s.category == category) out.push_back(&s);
  }
  return out;
}

std::vector<TopicPair> parse_topics(std::string_view text) {
  std::vector<TopicPair> out;
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    require(tab != std::string_view::npos, ErrorCode::DataError,
            "topics line " + std::to_string(line_no) + ": expected topic<TAB>subtopic");
    TopicPair p{std::string(trim(line.substr(0, tab))), std::string(trim(line.substr(tab + 1)))};
    require(!p.topic.empty() && !p.subtopic.empty(), ErrorCode::DataError,
            "topics line " + std::to_string(line_no) + ": empty field");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<TopicPair> load_topics(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::DataError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_topics(ss.str());
}

}  // namespace mtforge::guideline
