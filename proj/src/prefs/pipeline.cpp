#include "mtforge/prefs/pipeline.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/parallel.hpp"
#include "mtforge/core/rng.hpp"

namespace mtforge::prefs {

MbrPrompt mbr_prompt_from_json(const Json& j) {
  std::optional<Conversation> prompt;
  try {
    prompt = field(j, "prompt").get<Conversation>();
  } catch (const Error& e) {
    fail(ErrorCode::DataError, "prompt: " + e.detail());
  } catch (const Json::exception& e) {
    fail(ErrorCode::DataError, std::string("prompt: ") + e.what());
  }
  MbrPrompt p{optional_string_field(j, "id").value_or(""), std::move(*prompt), string_field(j, "source"),
              optional_string_field(j, "reference"), {}};
  if (j.contains("candidates")) {
    require(j.at("candidates").is_array(), ErrorCode::DataError, "candidates must be an array");
    for (const auto& c : j.at("candidates")) {
      require(c.is_string(), ErrorCode::DataError, "candidates must be strings");
      p.candidates.push_back(c.get<std::string>());
    }
  }
  return p;
}

Json MbrPairCounts::to_json() const {
  return Json{{"prompts", prompts},       {"mbr_pairs", mbr_pairs},       {"identical", identical},
              {"metric_failed", metric_failed}, {"judge_failed", judge_failed}, {"emitted", emitted}};
}

MbrPairResult build_mbr_pairs(const std::vector<MbrPrompt>& prompts, gateway::Gateway& gw,
                              const MbrPairOptions& options) {
  enum class Outcome { Identical, MetricFailed, JudgeFailed, Emitted };
  std::vector<Outcome> outcome(prompts.size());
  std::vector<std::optional<PreferencePair>> pairs(prompts.size());

  parallel_for(prompts.size(), options.concurrency, [&](std::size_t i) {
    const auto& p = prompts[i];
    auto candidates = p.candidates;
    if (candidates.empty()) {
      gateway::GenerationRequest req;
      req.endpoint_id = options.generator_endpoint;
      for (const auto& t : p.prompt.turns()) req.prompt_messages.push_back({std::string(to_string(t.role)), t.text});
      req.temperature = options.temperature;
      req.num_samples = options.num_samples;
      req.seed = mix_seed(options.seed, i);
      candidates = gw.generate(req);
    }
    const auto m = mbr(std::move(candidates), metric_utility(gw, options.utility_endpoint, p.source_text));
    const auto& best = m.candidates[m.best_index];
    const auto& worst = m.candidates[m.worst_index];
    if (best == worst) {
      outcome[i] = Outcome::Identical;
      return;
    }
    auto cfg = options.double_check;
    cfg.seed = mix_seed(cfg.seed, i);
    const auto check = double_check({p.prompt.last_user_text(), p.source_text, p.reference, best, worst}, gw, cfg);
    if (!check.passed) {
      outcome[i] = check.checks.size() == 1 ? Outcome::MetricFailed : Outcome::JudgeFailed;
      return;
    }
    pairs[i] = PreferencePair{p.id, p.prompt, best, worst, Provenance::MBR, check.checks};
    outcome[i] = Outcome::Emitted;
  });

  MbrPairResult result;
  auto& c = result.counts;
  c.prompts = prompts.size();
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    switch (outcome[i]) {
      case Outcome::Identical: ++c.identical; break;
      case Outcome::MetricFailed: ++c.mbr_pairs; ++c.metric_failed; break;
      case Outcome::JudgeFailed: ++c.mbr_pairs; ++c.judge_failed; break;
      case Outcome::Emitted:
        ++c.mbr_pairs;
        ++c.emitted;
        result.pairs.push_back(std::move(*pairs[i]));
        break;
    }
  }
  return result;
}

std::optional<PreferencePair> reward_pair(const std::string& id, const Conversation& prompt,
                                          const std::vector<std::string>& candidates, gateway::Gateway& gw,
                                          const std::string& reward_endpoint, Provenance provenance) {
  require(!candidates.empty(), ErrorCode::PreconditionViolation, id + ": no candidates");
  std::vector<double> rewards;
  for (const auto& c : candidates) rewards.push_back(gw.score_reward(reward_endpoint, prompt, c));
  std::size_t best = 0, worst = 0;
  for (std::size_t i = 1; i < rewards.size(); ++i) {
    if (rewards[i] > rewards[best]) best = i;
    if (rewards[i] < rewards[worst]) worst = i;
  }
  if (candidates[best] == candidates[worst]) return std::nullopt;
  return PreferencePair{id, prompt, candidates[best], candidates[worst], provenance, {}};
}

}  // namespace mtforge::prefs
