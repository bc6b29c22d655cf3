#include "mtforge/sft/pipeline.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/parallel.hpp"
#include "mtforge/sft/selection.hpp"
#include "mtforge/sft/translation_score.hpp"

namespace mtforge::sft {

Json CurationCounts::to_json() const {
  return Json{{"ingested", ingested},
              {"triaged", triaged},
              {"triage_failures", triage_failures},
              {"kept", kept},
              {"candidates_scored", candidates_scored},
              {"selected", selected},
              {"selection_failures", selection_failures}};
}

CurationResult curate_sft(std::vector<SftRecord> records, gateway::Gateway& gw, const CurationOptions& options) {
  enum class Outcome { TriageFailed, Dropped, NoSelection, Selected };
  std::vector<Outcome> outcome(records.size(), Outcome::Dropped);

  parallel_for(records.size(), options.concurrency, [&](std::size_t i) {
    auto& r = records[i];
    if (!r.scores) {
      try {
        r.scores = triage(r.conversation, gw, options.judge_endpoint);
      } catch (const Error& e) {
        if (options.strict || e.code() != ErrorCode::ParseFailure) throw;
        outcome[i] = Outcome::TriageFailed;
        return;
      }
    }
    if (!keep_record(*r.scores, r.conversation.source_dataset(), options.allowlist, options.keep_threshold)) return;
    gather_candidates(r, gw, options.teacher_endpoints);
    if (r.candidates.empty()) {
      outcome[i] = Outcome::NoSelection;
      return;
    }
    try {
      select_answer(r, gw, options.reward_endpoint);
    } catch (const Error& e) {
      if (options.strict || e.code() != ErrorCode::AllCandidatesFailed) throw;
      outcome[i] = Outcome::NoSelection;
      return;
    }
    if (options.translation_judge_endpoint && r.scores->category() == Category::Translation) {
      r.translation_score = score_translation_answer(r.conversation.last_user_text(), r.selected()->text, gw,
                                                     *options.translation_judge_endpoint);
    }
    outcome[i] = Outcome::Selected;
  });

  CurationResult result;
  auto& c = result.counts;
  c.ingested = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (outcome[i] == Outcome::TriageFailed) {
      ++c.triage_failures;
      continue;
    }
    ++c.triaged;
    if (outcome[i] == Outcome::Dropped) continue;
    ++c.kept;
    for (const auto& cand : records[i].candidates) c.candidates_scored += cand.reward.has_value();
    if (outcome[i] == Outcome::NoSelection) {
      ++c.selection_failures;
      continue;
    }
    ++c.selected;
    result.selected.push_back(std::move(records[i]));
  }
  return result;
}

}  // namespace mtforge::sft
