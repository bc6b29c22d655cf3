#pragma once

// Deterministic stand-ins for every endpoint the pipelines talk to, used by
// --offline runs and tests. The generator answers any prompt the library
// builds, dispatching on the prompt's shape. All choices are pure functions
// of the request text (and seed), exposed below so that replay oracles can
// recompute them.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mtforge/core/types.hpp"
#include "mtforge/gateway/transport.hpp"
#include "mtforge/guideline/catalog.hpp"

namespace mtforge::cli::offline {

// Uniform in [0, 1) from a hash of the parts.
double unit_hash(std::initializer_list<std::string_view> parts);

// Guideline data generation.
double poison_rate();        // share of sources that already follow a guideline
double broken_output_rate(); // share of generator outputs missing ###END###
std::string mock_source(const std::vector<const guideline::GuidelineSpec*>& guidelines, std::string_view topic,
                        std::uint64_t seed);
bool mock_output_broken(std::string_view topic, std::uint64_t seed);
std::string mock_generation_output(const guideline::Catalog& catalog, std::string_view prompt, std::uint64_t seed);
bool judge_flags_source(std::string_view source);  // "Guidelines Check: 1"
std::string mock_translation(std::string_view source);
bool editor_skips(std::string_view guideline_id, std::string_view text);
std::string mock_edit(const guideline::Catalog& catalog, std::string_view translation);

// SFT triage: scores derived from the prompt text.
ScoreBundle mock_triage(std::string_view prompt);
int mock_translation_score(std::string_view prompt);

// Pairwise judge prefers the response with the larger hash; equal text ties.
Choice mock_preference(std::string_view response_a, std::string_view response_b);

int mock_ifmt_score(std::string_view prompt);  // 0 means the judge emits an out-of-range result

// Metric value for a (source, translation, reference) triple; [0,1) for
// higher-better metrics, [0,25) for lower-better ones.
double mock_metric(std::string_view metric_id, Direction direction, std::string_view source,
                   std::string_view translation, std::string_view reference);
double mock_reward(std::string_view messages_json, std::string_view answer);

// Free-form answer (SFT teachers, MBR candidates, arena systems).
std::string mock_answer(std::string_view prompt, std::uint64_t seed, int sample);

std::shared_ptr<gateway::Transport> generator(std::shared_ptr<const guideline::Catalog> catalog);
std::shared_ptr<gateway::Transport> metric(std::string metric_id, Direction direction);
std::shared_ptr<gateway::Transport> reward();

}  // namespace mtforge::cli::offline
