#include "mtforge/guideline/pipeline.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/parallel.hpp"
#include "mtforge/core/rng.hpp"
#include "mtforge/core/text.hpp"
#include "mtforge/guideline/prompts.hpp"

namespace mtforge::guideline {

Json VerifiableRecord::to_json() const {
  Json j = sample ? sample->to_json() : Json{{"state", "Dropped"}, {"drop_reason", drop_reason}};
  j["id"] = "vt-" + std::to_string(index);
  j["index"] = index;
  j["seed"] = seed;
  if (source_language && target_language) {
    j["source_lang"] = source_language->code();
    j["target_lang"] = target_language->code();
  }
  return j;
}

Json VerifiableCounts::to_json() const {
  return Json{{"bundles", bundles},           {"generated", generated}, {"source_verified", source_verified},
              {"translated", translated},     {"accepted", accepted},   {"rejected", rejected},
              {"reasons", Json(reasons)}};
}

VerifiableCounts count_records(std::span<const VerifiableRecord> records) {
  VerifiableCounts c;
  for (const auto& r : records) {
    ++c.bundles;
    if (!r.sample) {
      ++c.reasons[r.drop_reason];
      continue;
    }
    ++c.generated;
    const auto& s = *r.sample;
    // A sample that reached a later state passed through every earlier one.
    if (s.translation()) {
      ++c.source_verified;
      ++c.translated;
    } else if (s.state() == SampleState::SourceVerified) {
      ++c.source_verified;
    }
    if (s.state() == SampleState::Accepted) ++c.accepted;
    if (s.state() == SampleState::Rejected) {
      ++c.rejected;
      ++c.reasons[s.rejection_reason()];
    }
  }
  return c;
}

VerifiableRecord process_verifiable(const Catalog& catalog, std::span<const TopicPair> topics, gateway::Gateway& gw,
                                    const VerifiableEndpoints& endpoints, const VerifiableRunOptions& options,
                                    std::uint64_t index) {
  require(!options.target_languages.empty(), ErrorCode::InvalidArgument, "no target languages");
  VerifiableRecord rec;
  rec.index = index;
  rec.seed = mix_seed(options.seed, index);
  const auto bundle = sample_bundle(catalog, topics, rec.seed, options.bundle);
  Rng rng(mix_seed(rec.seed, 1));
  rec.source_language = options.source_language;
  rec.target_language = options.target_languages[rng.index(options.target_languages.size())];

  gateway::GenerationRequest req;
  req.endpoint_id = endpoints.generator;
  req.prompt_messages = {{"user", build_generation_prompt(bundle)}};
  req.temperature = options.generation_temperature;
  req.seed = rec.seed;
  const auto raw = gw.generate(req).front();
  GenerationOutput parsed;
  try {
    parsed = parse_generation_output(raw);
  } catch (const Error& e) {
    if (options.strict || e.code() != ErrorCode::MarkerMissing) throw;
    rec.drop_reason = "generation: missing marker " + e.detail();
    return rec;
  }
  if (parsed.source_text.empty()) {
    if (options.strict) fail(ErrorCode::MalformedResponse, "generator returned an empty source");
    rec.drop_reason = "generation: empty source";
    return rec;
  }
  auto& sample = rec.sample.emplace(bundle, parsed.source_text, parsed.guidelines_text);

  try {
    if (!verify_source_violates(sample, gw, endpoints.judge)) return rec;
  } catch (const Error& e) {
    if (options.strict || e.code() != ErrorCode::ParseFailure) throw;
    sample.reject("judge: unparseable verdict");
    return rec;
  }

  const auto& src_name = options.source_language.display_name();
  const auto& tgt_name = rec.target_language->display_name();
  const auto translation = gw.complete(endpoints.translator,
                                       build_translation_prompt(sample.source_text(), src_name, tgt_name));
  const auto& shown = sample.guidelines_text().empty() ? format_guidelines(bundle) : sample.guidelines_text();
  const auto edited = std::string(trim(gw.complete(endpoints.editor, build_apply_prompt(shown, translation, tgt_name))));
  if (edited.empty()) {
    sample.reject("editor: empty output");
    return rec;
  }
  const auto quality = gw.score_quality(endpoints.quality, {sample.source_text(), edited, std::nullopt, ""});
  sample.set_translation(edited, quality);
  verify_translation(sample, options.quality_gate);
  return rec;
}

std::vector<VerifiableRecord> run_verifiable(const Catalog& catalog, std::span<const TopicPair> topics,
                                             gateway::Gateway& gw, const VerifiableEndpoints& endpoints,
                                             const VerifiableRunOptions& options) {
  std::vector<VerifiableRecord> out(options.count);
  parallel_for(options.count, options.concurrency, [&](std::size_t i) {
    out[i] = process_verifiable(catalog, topics, gw, endpoints, options, i);
  });
  return out;
}

}  // namespace mtforge::guideline
