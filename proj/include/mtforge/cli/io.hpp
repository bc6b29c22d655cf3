#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mtforge/core/error.hpp"
#include "mtforge/core/json.hpp"

namespace mtforge::cli {

// Line-by-line JSONL input. Blank lines are ignored. A line that is not a
// JSON object, or that `convert` rejects with an Error, raises DataError
// naming the line when strict; otherwise it is recorded and skipped.
class JsonlReader {
 public:
  JsonlReader(std::istream& in, bool strict) : in_(in), strict_(strict) {}

  // Next valid object, or false at end of input.
  bool next(Json& out, std::size_t& line_no);

  // Reads up to `max` records, converting each. Returns (line, record) pairs.
  template <typename T>
  std::vector<std::pair<std::size_t, T>> read_chunk(std::size_t max, const std::function<T(const Json&)>& convert) {
    std::vector<std::pair<std::size_t, T>> out;
    Json j;
    std::size_t line = 0;
    while (out.size() < max && next(j, line)) {
      try {
        out.emplace_back(line, convert(j));
      } catch (const Error& e) {
        reject(line, e.detail());
      }
    }
    return out;
  }

  std::size_t accepted() const { return accepted_; }
  const std::vector<std::pair<std::size_t, std::string>>& skipped() const { return skipped_; }

  // Marks an already-returned line as bad (conversion failure).
  void reject(std::size_t line_no, const std::string& why);

 private:
  std::istream& in_;
  bool strict_;
  std::size_t line_ = 0;
  std::size_t accepted_ = 0;
  std::vector<std::pair<std::size_t, std::string>> skipped_;
};

// Audit record written next to every output.
struct Manifest {
  std::string run_id;
  std::string subcommand;
  std::string config_digest;
  std::string started;
  std::string finished;
  Json input_counts = Json::object();
  Json output_counts = Json::object();
  Json stages = Json::object();
  Json endpoints = Json::object();
  Json skipped = Json::array();  // {"line","error"} for lenient skips
  Json extra = Json::object();
  int exit_status = 0;
  std::string error;

  Json to_json() const;
};

std::string utc_timestamp();

// Opens a file for reading, or stdin for "" and "-". DataError when missing.
class InputSource {
 public:
  explicit InputSource(const std::string& path);
  std::istream& stream() { return file_ ? *file_ : *std_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* std_ = nullptr;
};

// Writes to a file, or to `fallback` for "" and "-".
class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& fallback);
  std::ostream& stream() { return file_ ? *file_ : *fallback_; }
  void write(const Json& j) { stream() << j.dump() << '\n'; ++written_; }
  std::size_t written() const { return written_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* fallback_;
  std::size_t written_ = 0;
};

}  // namespace mtforge::cli
