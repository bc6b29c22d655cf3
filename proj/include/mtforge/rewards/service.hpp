#pragma once

#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <string>

#include "mtforge/guideline/catalog.hpp"
#include "mtforge/rewards/reward.hpp"

namespace httplib {
class Server;
}

namespace mtforge::rewards {

// Reward lookup by sample id over a fixed set of verifiable samples and
// preference items. Immutable after loading; evaluate() is thread-safe.
class RewardService {
 public:
  explicit RewardService(RewardMode mode = RewardMode::Strict) : mode_(mode) {}

  // One JSON object per line: verifiable samples (as written by
  // gen-verifiable) or preference eval items. Records without a usable state
  // (dropped or rejected samples) are skipped. Returns how many were loaded.
  std::size_t load_jsonl(std::istream& in, const guideline::Catalog& catalog);
  void add_sample(std::string id, guideline::VerifiableSample sample);
  void add_preference(std::string id, PreferenceEvalItem item);

  std::size_t size() const { return samples_.size() + preferences_.size(); }

  // {"sample_id","model_output"} -> {"sample_id","kind","reward",...}.
  // Throws DataError for malformed requests or unknown ids.
  Json evaluate(const Json& request) const;

  struct BatchCounts {
    std::size_t requests = 0;
    std::size_t scored = 0;
    std::size_t errors = 0;
  };
  // JSONL in, JSONL out in input order. Bad lines become {"line","error"}
  // records unless strict, in which case DataError names the line.
  BatchCounts run_batch(std::istream& in, std::ostream& out, bool strict) const;

  // POST /reward takes one request object; GET /info describes the service.
  void install_routes(httplib::Server& server) const;

 private:
  RewardMode mode_;
  std::map<std::string, guideline::VerifiableSample, std::less<>> samples_;
  std::map<std::string, PreferenceEvalItem, std::less<>> preferences_;
};

}  // namespace mtforge::rewards
