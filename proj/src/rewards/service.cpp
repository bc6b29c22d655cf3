#include "mtforge/rewards/service.hpp"

#include <httplib.h>

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::rewards {

std::size_t RewardService::load_jsonl(std::istream& in, const guideline::Catalog& catalog) {
  std::string line;
  std::size_t line_no = 0, loaded = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = Json::parse(line);
      const auto id = string_field(j, "id");
      if (j.contains("chosen_position")) {
        add_preference(id, preference_eval_item_from_json(j));
        ++loaded;
        continue;
      }
      const auto state = string_field(j, "state");
      if (state == "Dropped" || state == "Rejected" || state == "Generated") continue;
      add_sample(id, guideline::VerifiableSample::from_json(j, catalog));
      ++loaded;
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::DataError, "samples line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      fail(ErrorCode::DataError, "samples line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  return loaded;
}

void RewardService::add_sample(std::string id, guideline::VerifiableSample sample) {
  require(!samples_.count(id) && !preferences_.count(id), ErrorCode::DataError, "duplicate sample id " + id);
  samples_.emplace(std::move(id), std::move(sample));
}

void RewardService::add_preference(std::string id, PreferenceEvalItem item) {
  require(!samples_.count(id) && !preferences_.count(id), ErrorCode::DataError, "duplicate sample id " + id);
  preferences_.emplace(std::move(id), std::move(item));
}

Json RewardService::evaluate(const Json& request) const {
  require(request.is_object(), ErrorCode::DataError, "request must be a JSON object");
  const auto id = string_field(request, "sample_id");
  const auto output = string_field(request, "model_output");
  if (const auto it = samples_.find(id); it != samples_.end()) {
    if (output.empty()) return Json{{"sample_id", id}, {"kind", "translation"}, {"reward", 0.0}, {"reason", "empty output"}};
    auto j = to_json(translation_reward(it->second, output, mode_));
    j["sample_id"] = id;
    j["kind"] = "translation";
    j["reward"] = j["value"];
    return j;
  }
  if (const auto it = preferences_.find(id); it != preferences_.end()) {
    const auto r = preference_eval_reward(it->second, output);
    Json j{{"sample_id", id}, {"kind", "preference"}, {"reward", r.value}, {"value", r.value}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
  }
  fail(ErrorCode::DataError, "unknown sample_id " + id);
}

RewardService::BatchCounts RewardService::run_batch(std::istream& in, std::ostream& out, bool strict) const {
  BatchCounts c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++c.requests;
    try {
      Json req;
      try {
        req = Json::parse(line);
      } catch (const Json::parse_error& e) {
        fail(ErrorCode::DataError, e.what());
      }
      out << evaluate(req).dump() << '\n';
      ++c.scored;
    } catch (const Error& e) {
      if (strict) fail(ErrorCode::DataError, "line " + std::to_string(line_no) + ": " + e.detail());
      ++c.errors;
      out << Json{{"line", line_no}, {"error", e.detail()}}.dump() << '\n';
    }
  }
  return c;
}

void RewardService::install_routes(httplib::Server& server) const {
  server.Post("/reward", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_content(evaluate(Json::parse(req.body)).dump(), "application/json");
    } catch (const Json::parse_error& e) {
      res.status = 400;
      res.set_content(Json{{"error", e.what()}}.dump(), "application/json");
    } catch (const Error& e) {
      res.status = 400;
      res.set_content(Json{{"error", e.detail()}}.dump(), "application/json");
    }
  });
  server.Get("/info", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(Json{{"kind", "verifiable_reward"}, {"mode", to_string(mode_)}, {"samples", size()}}.dump(),
                    "application/json");
  });
}

}  // namespace mtforge::rewards
