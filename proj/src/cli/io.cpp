#include "mtforge/cli/io.hpp"

#include <chrono>
#include <ctime>
#include <iostream>

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::cli {

bool JsonlReader::next(Json& out, std::size_t& line_no) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (trim(line).empty()) continue;
    try {
      out = Json::parse(line);
    } catch (const Json::parse_error& e) {
      reject(line_, std::string("invalid JSON: ") + e.what());
      continue;
    }
    if (!out.is_object()) {
      reject(line_, "expected a JSON object");
      continue;
    }
    line_no = line_;
    ++accepted_;
    return true;
  }
  return false;
}

void JsonlReader::reject(std::size_t line_no, const std::string& why) {
  if (strict_) fail(ErrorCode::DataError, "line " + std::to_string(line_no) + ": " + why);
  skipped_.emplace_back(line_no, why);
}

Json Manifest::to_json() const {
  Json j{{"run_id", run_id},
         {"subcommand", subcommand},
         {"config_digest", config_digest},
         {"started", started},
         {"finished", finished},
         {"input_counts", input_counts},
         {"output_counts", output_counts},
         {"stages", stages},
         {"endpoints", endpoints},
         {"skipped", skipped},
         {"exit_status", exit_status}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  if (!error.empty()) j["error"] = error;
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

InputSource::InputSource(const std::string& path) {
  if (path.empty() || path == "-") {
    std_ = &std::cin;
    return;
  }
  file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*file_) fail(ErrorCode::DataError, "cannot read input " + path);
}

OutputSink::OutputSink(const std::string& path, std::ostream& fallback) : fallback_(&fallback) {
  if (path.empty() || path == "-") return;
  file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*file_) fail(ErrorCode::DataError, "cannot write output " + path);
}

}  // namespace mtforge::cli
