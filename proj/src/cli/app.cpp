#include "mtforge/cli/app.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "mtforge/cli/config.hpp"
#include "mtforge/cli/io.hpp"
#include "mtforge/cli/offline.hpp"
#include "mtforge/core/error.hpp"
#include "mtforge/core/json.hpp"
#include "mtforge/core/languages.hpp"
#include "mtforge/core/parallel.hpp"
#include "mtforge/core/rng.hpp"
#include "mtforge/core/text.hpp"
#include "mtforge/corpus/mixture.hpp"
#include "mtforge/corpus/parallel_pair.hpp"
#include "mtforge/corpus/quality_gate.hpp"
#include "mtforge/corpus/templates.hpp"
#include "mtforge/eval/chrf.hpp"
#include "mtforge/eval/ifmt.hpp"
#include "mtforge/eval/report.hpp"
#include "mtforge/eval/winrate.hpp"
#include "mtforge/gateway/gateway.hpp"
#include "mtforge/guideline/catalog.hpp"
#include "mtforge/guideline/pipeline.hpp"
#include "mtforge/prefs/ingest.hpp"
#include "mtforge/prefs/pipeline.hpp"
#include "mtforge/rewards/service.hpp"
#include "mtforge/sft/pipeline.hpp"

namespace mtforge::cli {
namespace {

// Records held in memory at once by the streaming subcommands.
constexpr std::size_t kChunk = 256;

struct Options {
  std::string config, input, output, manifest, report, samples, mode, layout, host;
  std::vector<std::string> groups;
  bool offline = false, strict = false, serve = false, force = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> concurrency, count;
  std::optional<int> port;
};

class Run {
 public:
  Run(std::string subcommand, const Options& opt, std::ostream& out, std::ostream& err)
      : opt_(opt), out_(out), err_(err) {
    cfg = opt.config.empty() ? parse_config("") : load_config(opt.config);
    strict = opt.strict || cfg.strict;
    seed = opt.seed.value_or(cfg.seed);
    concurrency = opt.concurrency.value_or(cfg.concurrency);
    if (concurrency == 0) fail(ErrorCode::ConfigInvalid, "--concurrency must be >= 1");
    manifest.subcommand = subcommand;
    manifest.config_digest = cfg.digest;
    manifest.started = utc_timestamp();
    manifest.run_id = sha256_hex(subcommand + '\n' + cfg.digest + '\n' + std::to_string(seed) + '\n' + opt.input +
                                 (opt.offline ? "\noffline" : ""))
                          .substr(0, 16);
    manifest.extra["seed"] = seed;
    manifest.extra["offline"] = opt.offline;
    manifest.extra["strict"] = strict;
  }

  const Options& opt() const { return opt_; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

  const guideline::Catalog& catalog() {
    if (!catalog_) {
      const auto& dir = cfg.gen_verifiable.catalog_dir;
      catalog_ = std::make_shared<const guideline::Catalog>(guideline::Catalog::load_directory(
          dir.empty() ? default_data_dir() / "guidelines" : cfg.resolve(dir)));
    }
    return *catalog_;
  }

  gateway::Gateway& gw() {
    if (!gw_) {
      gw_ = std::make_unique<gateway::Gateway>(opt_.offline ? std::make_shared<gateway::SimulatedClock>()
                                                            : gateway::system_clock());
    }
    return *gw_;
  }

  // Registers an endpoint, performs the /info handshake and records it.
  void connect(const std::string& id, std::string_view kind, std::string_view what) {
    const auto& spec = cfg.endpoint(id, kind, what);
    auto& g = gw();
    if (g.has_endpoint(id)) return;
    auto config = spec.config;
    std::shared_ptr<gateway::Transport> transport;
    if (opt_.offline) {
      config.cache_dir.reset();
      if (spec.kind == "generator") {
        catalog();
        transport = offline::generator(catalog_);
      } else if (spec.kind == "metric") {
        transport = offline::metric(spec.metric_id, spec.direction);
      } else {
        transport = offline::reward();
      }
    } else {
      transport = gateway::make_http_transport(config.base_url);
    }
    g.register_endpoint(config, transport);
    const auto info = g.info(id);
    if (info.kind != spec.kind) {
      fail(ErrorCode::ConfigInvalid, "endpoint '" + id + "' is configured as " + spec.kind + " but reports " + info.kind);
    }
    if (spec.kind == "metric" && info.metric_id && *info.metric_id != spec.metric_id) {
      fail(ErrorCode::ConfigInvalid,
           "endpoint '" + id + "' is configured as " + spec.metric_id + " but serves " + *info.metric_id);
    }
    Json e{{"kind", info.kind}, {"version", info.version}};
    if (info.metric_id) e["metric_id"] = *info.metric_id;
    if (info.direction) e["direction"] = std::string(to_string(*info.direction));
    manifest.endpoints[id] = std::move(e);
  }

  void record_skips(const JsonlReader& reader) {
    for (const auto& [line, why] : reader.skipped()) manifest.skipped.push_back({{"line", line}, {"error", why}});
  }

  void finish_endpoints() {
    if (!gw_) return;
    for (const auto& id : gw_->endpoint_ids()) {
      const auto s = gw_->stats(id);
      manifest.endpoints[id]["stats"] = {
          {"requests", s.requests}, {"wire_calls", s.wire_calls}, {"cache_hits", s.cache_hits}, {"failures", s.failures}};
    }
  }

  Config cfg;
  bool strict = false;
  std::uint64_t seed = 0;
  std::size_t concurrency = 1;
  Manifest manifest;

 private:
  Options opt_;
  std::ostream& out_;
  std::ostream& err_;
  std::shared_ptr<const guideline::Catalog> catalog_;
  std::unique_ptr<gateway::Gateway> gw_;
};

// Converter wrapper that turns JSON type errors into DataError.
template <typename F>
auto guarded(F f) {
  return [f](const Json& j) {
    try {
      return f(j);
    } catch (const Json::exception& e) {
      fail(ErrorCode::DataError, e.what());
    }
  };
}

std::string report_base(const Run& run) {
  if (!run.opt().report.empty()) return run.opt().report;
  if (!run.opt().output.empty() && run.opt().output != "-") return run.opt().output;
  return {};
}

void write_report(Run& run, const eval::EvalReport& report) {
  const auto& groups = run.cfg.eval.language_groups.empty() ? eval::default_language_groups()
                                                            : run.cfg.eval.language_groups;
  const auto layout = eval::parse_report_layout(run.opt().layout.empty() ? run.cfg.eval.layout : run.opt().layout);
  const auto rendered = eval::emit_report(report, groups, layout, run.opt().groups);
  const auto base = report_base(run);
  if (base.empty()) {
    run.err() << rendered.text;
    return;
  }
  std::ofstream(base + ".report.json") << rendered.json.dump(2) << '\n';
  std::ofstream(base + ".report.txt") << rendered.text;
  run.manifest.extra["report"] = base + ".report.json";
}

std::vector<std::pair<std::string, double>> language_means(const std::map<std::string, std::pair<double, std::size_t>>& acc,
                                                           double scale = 1.0) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [lang, sum_n] : acc) {
    if (sum_n.second) out.emplace_back(lang, scale * sum_n.first / static_cast<double>(sum_n.second));
  }
  return out;
}

// ---------------------------------------------------------------- corpus-prep

void cmd_corpus_prep(Run& run) {
  const auto& c = run.cfg.corpus_prep;
  corpus::TemplateRegistry templates;
  if (c.templates_dir.empty()) {
    templates = corpus::TemplateRegistry::builtin();
  } else {
    templates.load_directory(run.cfg.resolve(c.templates_dir));
  }
  const auto ids = templates.ids();
  if (ids.empty()) fail(ErrorCode::ConfigInvalid, "corpus_prep: no templates loaded");
  const bool random_template = c.template_id == "random";
  if (!random_template && !templates.contains(c.template_id)) {
    fail(ErrorCode::ConfigInvalid, "corpus_prep.template: unknown template '" + c.template_id + "'");
  }
  std::optional<corpus::GateOptions> gate;
  if (!c.quality_endpoint.empty()) {
    if (!c.quality_threshold) fail(ErrorCode::ConfigInvalid, "corpus_prep.quality_threshold must be set with a quality endpoint");
    run.connect(c.quality_endpoint, "metric", "corpus_prep.quality_endpoint");
    gate = corpus::GateOptions{c.quality_endpoint, *c.quality_threshold, c.lenient, run.concurrency};
  }

  InputSource in(run.opt().input);
  OutputSink sink(run.opt().output, run.out());
  JsonlReader reader(in.stream(), run.strict);
  std::size_t read = 0, gated_out = 0, gate_skipped = 0;
  std::int64_t tokens = 0;
  const std::function<corpus::ParallelPair(const Json&)> convert = guarded([](const Json& j) {
    auto p = corpus::pair_from_json(j);
    try {
      p.validate();
    } catch (const Error& e) {
      fail(ErrorCode::DataError, e.detail());
    }
    return p;
  });
  for (;;) {
    auto chunk = reader.read_chunk<corpus::ParallelPair>(kChunk, convert);
    if (chunk.empty()) break;
    read += chunk.size();
    std::vector<corpus::ParallelPair> pairs;
    pairs.reserve(chunk.size());
    for (auto& [line, p] : chunk) pairs.push_back(std::move(p));
    std::vector<std::optional<MetricScore>> scores(pairs.size());
    if (gate) {
      auto result = corpus::quality_gate(pairs, run.gw(), *gate);
      gated_out += pairs.size() - result.kept.size() - result.skipped.size();
      gate_skipped += result.skipped.size();
      for (const auto& s : result.skipped) {
        run.manifest.skipped.push_back({{"line", chunk[s.index].first}, {"error", s.reason}});
      }
      pairs = std::move(result.kept);
      scores.assign(result.scores.begin(), result.scores.end());
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& p = pairs[i];
      std::string id = c.template_id;
      if (random_template) {
        Rng rng(mix_seed(run.seed, stable_hash(p.source + '\x1f' + p.target)));
        id = ids[rng.index(ids.size())];
      }
      Json j = corpus::to_json(p);
      j["template"] = id;
      j["text"] = templates.render(p, id);
      if (scores[i]) j["quality"] = Json(*scores[i]);
      tokens += corpus::estimate_tokens(j["text"].get<std::string>(), c.tokens_per_word);
      sink.write(j);
    }
  }
  run.record_skips(reader);
  run.manifest.input_counts = {{"pairs", read}};
  run.manifest.stages["quality_gate"] = {
      {"in", read}, {"kept", read - gated_out - gate_skipped}, {"below_threshold", gated_out}, {"skipped", gate_skipped}};
  run.manifest.output_counts = {{"rendered", sink.written()}};
  run.manifest.extra["parallel_tokens"] = tokens;
  if (c.mixture_total_tokens) {
    try {
      const auto plan = corpus::plan_mixture(
          corpus::MixtureSpec{}, corpus::BucketTokens{c.available_monolingual, tokens, c.available_instruction},
          *c.mixture_total_tokens);
      run.manifest.extra["mixture"] = {
          {"monolingual", plan.monolingual}, {"parallel", plan.parallel}, {"instruction", plan.instruction}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InfeasibleMixture) throw;
      run.manifest.extra["mixture_error"] = e.detail();
      run.err() << "warning: " << e.detail() << '\n';
    }
  }
}

// ------------------------------------------------------------- gen-verifiable

void add_counts(guideline::VerifiableCounts& into, const guideline::VerifiableCounts& c) {
  into.bundles += c.bundles;
  into.generated += c.generated;
  into.source_verified += c.source_verified;
  into.translated += c.translated;
  into.accepted += c.accepted;
  into.rejected += c.rejected;
  for (const auto& [k, v] : c.reasons) into.reasons[k] += v;
}

void cmd_gen_verifiable(Run& run) {
  const auto& c = run.cfg.gen_verifiable;
  const guideline::VerifiableEndpoints eps{c.generator, c.judge, c.translator, c.editor, c.quality};
  run.connect(eps.generator, "generator", "gen_verifiable.generator");
  run.connect(eps.judge, "generator", "gen_verifiable.judge");
  run.connect(eps.translator, "generator", "gen_verifiable.translator");
  run.connect(eps.editor, "generator", "gen_verifiable.editor");
  run.connect(eps.quality, "metric", "gen_verifiable.quality");
  if (c.target_languages.empty()) fail(ErrorCode::ConfigInvalid, "gen_verifiable.target_languages is empty");

  guideline::VerifiableRunOptions o;
  o.seed = run.seed;
  o.count = run.opt().count.value_or(c.count);
  o.quality_gate = c.quality_gate;
  o.generation_temperature = c.generation_temperature;
  try {
    o.source_language = language_from_code(c.source_language);
    for (const auto& t : c.target_languages) o.target_languages.push_back(language_from_code(t));
  } catch (const Error& e) {
    fail(ErrorCode::ConfigInvalid, "gen_verifiable: " + e.detail());
  }
  o.concurrency = run.concurrency;
  o.bundle.strict_size = c.strict_bundle_size;
  o.strict = run.strict;

  const auto& catalog = run.catalog();
  const auto topics =
      guideline::load_topics(c.topics.empty() ? default_data_dir() / "topics.tsv" : run.cfg.resolve(c.topics));
  if (topics.empty()) fail(ErrorCode::ConfigInvalid, "gen_verifiable.topics is empty");

  OutputSink sink(run.opt().output, run.out());
  guideline::VerifiableCounts total;
  for (std::size_t start = 0; start < o.count; start += kChunk) {
    const auto n = std::min(kChunk, o.count - start);
    std::vector<guideline::VerifiableRecord> records(n);
    parallel_for(n, run.concurrency, [&](std::size_t i) {
      records[i] = guideline::process_verifiable(catalog, topics, run.gw(), eps, o, start + i);
    });
    add_counts(total, guideline::count_records(records));
    for (const auto& r : records) sink.write(r.to_json());
  }
  run.manifest.input_counts = {{"bundles", o.count}};
  run.manifest.stages = total.to_json();
  run.manifest.output_counts = {{"records", sink.written()}, {"accepted", total.accepted}, {"rejected", total.rejected}};
}

// ----------------------------------------------------------------- curate-sft

void cmd_curate_sft(Run& run) {
  const auto& c = run.cfg.curate_sft;
  sft::CurationOptions o;
  o.judge_endpoint = c.judge;
  o.reward_endpoint = c.reward;
  o.teacher_endpoints = c.teachers;
  if (!c.translation_judge.empty()) o.translation_judge_endpoint = c.translation_judge;
  o.allowlist = {c.allowlist.begin(), c.allowlist.end()};
  o.keep_threshold = c.keep_threshold;
  o.concurrency = run.concurrency;
  o.strict = run.strict;
  run.connect(c.judge, "generator", "curate_sft.judge");
  run.connect(c.reward, "reward", "curate_sft.reward");
  for (const auto& t : c.teachers) run.connect(t, "generator", "curate_sft.teachers");
  if (o.translation_judge_endpoint) run.connect(c.translation_judge, "generator", "curate_sft.translation_judge");

  InputSource in(run.opt().input);
  OutputSink sink(run.opt().output, run.out());
  JsonlReader reader(in.stream(), run.strict);
  sft::CurationCounts total;
  const std::function<sft::SftRecord(const Json&)> convert = guarded(sft::sft_record_from_json);
  for (;;) {
    auto chunk = reader.read_chunk<sft::SftRecord>(kChunk, convert);
    if (chunk.empty()) break;
    std::vector<sft::SftRecord> records;
    records.reserve(chunk.size());
    for (auto& [line, r] : chunk) records.push_back(std::move(r));
    auto result = sft::curate_sft(std::move(records), run.gw(), o);
    const auto& k = result.counts;
    total.ingested += k.ingested;
    total.triaged += k.triaged;
    total.triage_failures += k.triage_failures;
    total.kept += k.kept;
    total.candidates_scored += k.candidates_scored;
    total.selected += k.selected;
    total.selection_failures += k.selection_failures;
    for (const auto& r : result.selected) sink.write(sft::to_json(r));
  }
  run.record_skips(reader);
  run.manifest.input_counts = {{"records", total.ingested}};
  run.manifest.stages = total.to_json();
  run.manifest.output_counts = {{"selected", sink.written()}};
}

// ---------------------------------------------------------------- build-prefs

struct RewardPrompt {
  std::string id;
  Conversation prompt;
  std::vector<std::string> candidates;
  prefs::Provenance provenance = prefs::Provenance::OffPolicy;
};

RewardPrompt reward_prompt_from_json(const Json& j) {
  RewardPrompt p{optional_string_field(j, "id").value_or(""), field(j, "prompt").get<Conversation>(), {},
                 prefs::Provenance::OffPolicy};
  const auto& cands = field(j, "candidates");
  require(cands.is_array() && cands.size() >= 2, ErrorCode::DataError, "candidates must be an array of >= 2 strings");
  for (const auto& c : cands) {
    require(c.is_string(), ErrorCode::DataError, "candidates must be strings");
    p.candidates.push_back(c.get<std::string>());
  }
  if (const auto prov = optional_string_field(j, "provenance")) {
    try {
      p.provenance = prefs::parse_provenance(*prov);
    } catch (const Error& e) {
      fail(ErrorCode::DataError, e.detail());
    }
  }
  return p;
}

template <typename T>
std::vector<T> take(std::vector<std::pair<std::size_t, T>>& chunk) {
  std::vector<T> out;
  out.reserve(chunk.size());
  for (auto& [line, v] : chunk) out.push_back(std::move(v));
  return out;
}

void cmd_build_prefs(Run& run) {
  const auto& c = run.cfg.build_prefs;
  const std::string mode = run.opt().mode.empty() ? c.mode : run.opt().mode;
  static const std::set<std::string> kModes = {"mbr", "post_edit", "annotation", "reward"};
  if (!kModes.count(mode)) fail(ErrorCode::ConfigInvalid, "build-prefs mode must be mbr, post_edit, annotation or reward");
  run.manifest.extra["mode"] = mode;

  InputSource in(run.opt().input);
  OutputSink sink(run.opt().output, run.out());
  JsonlReader reader(in.stream(), run.strict);
  std::size_t records = 0;
  Json stages = Json::object();
  const auto emit = [&](const std::vector<prefs::PreferencePair>& pairs) {
    for (const auto& p : pairs) sink.write(prefs::to_json(p));
  };

  if (mode == "mbr") {
    run.connect(c.utility, "metric", "build_prefs.utility");
    run.connect(c.check_metric, "metric", "build_prefs.check_metric");
    run.connect(c.judge, "generator", "build_prefs.judge");
    if (!c.generator.empty()) run.connect(c.generator, "generator", "build_prefs.generator");
    prefs::MbrPairCounts total;
    const std::function<prefs::MbrPrompt(const Json&)> convert = guarded(prefs::mbr_prompt_from_json);
    for (;;) {
      auto chunk = reader.read_chunk<prefs::MbrPrompt>(kChunk, convert);
      if (chunk.empty()) break;
      records += chunk.size();
      const auto chunk_seed = mix_seed(run.seed, chunk.front().first);
      prefs::MbrPairOptions o;
      o.generator_endpoint = c.generator;
      o.utility_endpoint = c.utility;
      o.double_check = prefs::DoubleCheckConfig{c.check_metric, c.judge, chunk_seed};
      o.num_samples = c.num_samples;
      o.temperature = c.temperature;
      o.seed = chunk_seed;
      o.concurrency = run.concurrency;
      auto prompts = take(chunk);
      for (auto& p : prompts) {
        if (p.candidates.empty() && c.generator.empty()) {
          fail(ErrorCode::ConfigInvalid, "build_prefs.generator is needed for prompts without candidates");
        }
      }
      auto result = prefs::build_mbr_pairs(prompts, run.gw(), o);
      const auto& k = result.counts;
      total.prompts += k.prompts;
      total.mbr_pairs += k.mbr_pairs;
      total.identical += k.identical;
      total.metric_failed += k.metric_failed;
      total.judge_failed += k.judge_failed;
      total.emitted += k.emitted;
      emit(result.pairs);
    }
    stages = total.to_json();
  } else if (mode == "post_edit") {
    const std::function<prefs::PostEditRecord(const Json&)> convert = guarded(prefs::post_edit_from_json);
    for (;;) {
      auto chunk = reader.read_chunk<prefs::PostEditRecord>(kChunk, convert);
      if (chunk.empty()) break;
      records += chunk.size();
      emit(prefs::ingest_post_edits(take(chunk)));
    }
    stages["dropped"] = records - sink.written();
  } else if (mode == "annotation") {
    const std::function<prefs::AnnotationRecord(const Json&)> convert = guarded(prefs::annotation_from_json);
    for (;;) {
      auto chunk = reader.read_chunk<prefs::AnnotationRecord>(kChunk, convert);
      if (chunk.empty()) break;
      records += chunk.size();
      emit(prefs::ingest_annotations(take(chunk)));
    }
    stages["dropped"] = records - sink.written();
  } else {
    run.connect(c.reward, "reward", "build_prefs.reward");
    const std::function<RewardPrompt(const Json&)> convert = guarded(reward_prompt_from_json);
    std::size_t identical = 0;
    for (;;) {
      auto chunk = reader.read_chunk<RewardPrompt>(kChunk, convert);
      if (chunk.empty()) break;
      records += chunk.size();
      std::vector<std::optional<prefs::PreferencePair>> pairs(chunk.size());
      parallel_for(chunk.size(), run.concurrency, [&](std::size_t i) {
        const auto& p = chunk[i].second;
        pairs[i] = prefs::reward_pair(p.id, p.prompt, p.candidates, run.gw(), c.reward, p.provenance);
      });
      for (const auto& p : pairs) {
        if (p) {
          sink.write(prefs::to_json(*p));
        } else {
          ++identical;
        }
      }
    }
    stages["identical"] = identical;
  }
  run.record_skips(reader);
  run.manifest.input_counts = {{"records", records}};
  run.manifest.stages = std::move(stages);
  run.manifest.output_counts = {{"pairs", sink.written()}};
}

// --------------------------------------------------------------- reward-batch

void cmd_reward_batch(Run& run) {
  const auto& c = run.cfg.reward_batch;
  const auto mode = rewards::parse_reward_mode(run.opt().mode.empty() ? c.mode : run.opt().mode);
  const std::string samples = run.opt().samples.empty() ? (c.samples.empty() ? "" : run.cfg.resolve(c.samples).string())
                                                        : run.opt().samples;
  if (samples.empty()) fail(ErrorCode::ConfigInvalid, "reward-batch needs --samples or reward_batch.samples");
  std::ifstream sample_in(samples, std::ios::binary);
  if (!sample_in) fail(ErrorCode::DataError, "cannot read samples file " + samples);
  rewards::RewardService service(mode);
  const auto loaded = service.load_jsonl(sample_in, run.catalog());
  run.manifest.extra["mode"] = to_string(mode);
  run.manifest.input_counts = {{"samples_loaded", loaded}};

  if (run.opt().serve) {
    httplib::Server server;
    service.install_routes(server);
    const auto host = run.opt().host.empty() ? c.host : run.opt().host;
    const int port = run.opt().port.value_or(c.port);
    run.err() << "serving " << loaded << " samples on " << host << ':' << port << '\n';
    if (!server.listen(host, port)) fail(ErrorCode::EndpointUnavailable, "cannot listen on " + host + ":" + std::to_string(port));
    return;
  }
  InputSource in(run.opt().input);
  OutputSink sink(run.opt().output, run.out());
  const auto counts = service.run_batch(in.stream(), sink.stream(), run.strict);
  run.manifest.input_counts["requests"] = counts.requests;
  run.manifest.stages = {{"scored", counts.scored}, {"errors", counts.errors}};
  run.manifest.output_counts = {{"results", counts.requests}};
}

// ------------------------------------------------------------------ eval-chrf

std::string language_of(const Json& j) {
  if (const auto lang = optional_string_field(j, "lang")) return *lang;
  const auto lp = optional_string_field(j, "lp").value_or("");
  const auto dash = lp.rfind('-');
  return dash == std::string::npos ? lp : lp.substr(dash + 1);
}

struct ChrfItem {
  std::string id, lang, hypothesis, reference;
};

void cmd_eval_chrf(Run& run) {
  const auto params = run.cfg.eval.chrf;
  InputSource in(run.opt().input);
  OutputSink sink(run.opt().output, run.out());
  JsonlReader reader(in.stream(), run.strict);
  std::map<std::string, eval::ChrfStats> per_lang;
  eval::ChrfStats pooled;
  std::size_t n = 0;
  const std::function<ChrfItem(const Json&)> convert = guarded([](const Json& j) {
    auto hyp = optional_string_field(j, "hypothesis");
    if (!hyp) hyp = string_field(j, "translation");
    return ChrfItem{optional_string_field(j, "id").value_or(""), language_of(j), *hyp, string_field(j, "reference")};
  });
  for (;;) {
    auto chunk = reader.read_chunk<ChrfItem>(kChunk, convert);
    if (chunk.empty()) break;
    for (const auto& [line, item] : chunk) {
      const auto stats = eval::chrf_stats(item.hypothesis, item.reference, params);
      pooled += stats;
      if (!item.lang.empty()) per_lang[item.lang] += stats;
      ++n;
      Json j{{"id", item.id.empty() ? "line-" + std::to_string(line) : item.id},
             {"lang", item.lang},
             {"chrf", eval::chrf_score(stats, params)}};
      sink.write(j);
    }
  }
  run.record_skips(reader);
  if (n == 0) fail(ErrorCode::DataError, "no usable records");
  eval::EvalReport report;
  report.system = run.cfg.eval.system;
  report.metric = "chrf";
  for (const auto& [lang, stats] : per_lang) report.per_language.emplace_back(lang, eval::chrf_score(stats, params));
  report.aggregates = {{"instances", static_cast<double>(n)}, {"corpus_chrf", eval::chrf_score(pooled, params)}};
  report.excluded = reader.skipped().size();
  write_report(run, report);
  run.manifest.input_counts = {{"records", n}};
  run.manifest.output_counts = {{"scored", sink.written()}};
  run.manifest.extra["corpus_chrf"] = eval::chrf_score(pooled, params);
}

// ------------------------------------------------------------------- gen-ifmt

void cmd_gen_ifmt(Run& run) {
  const auto& c = run.cfg.ifmt;
  run.connect(c.generator, "generator", "ifmt.generator");
  InputSource in(run.opt().input);
  OutputSink sink(run.opt().output, run.out());
  JsonlReader reader(in.stream(), run.strict);
  using Item = std::pair<std::string, eval::IfMtAttributes>;
  const std::function<Item(const Json&)> convert = guarded([](const Json& j) {
    return Item{optional_string_field(j, "id").value_or(""), eval::ifmt_attributes_from_json(j)};
  });
  std::size_t read = 0, warnings = 0, failed = 0;
  for (;;) {
    auto chunk = reader.read_chunk<Item>(kChunk, convert);
    if (chunk.empty()) break;
    read += chunk.size();
    std::vector<std::optional<eval::IfMtGeneration>> gens(chunk.size());
    std::vector<std::string> errors(chunk.size());
    parallel_for(chunk.size(), run.concurrency, [&](std::size_t i) {
      const auto& [line, item] = chunk[i];
      eval::IfMtGenerateOptions o{c.generator, c.temperature, mix_seed(run.seed, line), run.strict || c.strict_rule_count};
      try {
        gens[i] = eval::generate_ifmt_instance(item.second, run.gw(), o,
                                               item.first.empty() ? "ifmt-" + std::to_string(line) : item.first);
      } catch (const Error& e) {
        const bool recoverable = e.code() == ErrorCode::ParseFailure || e.code() == ErrorCode::MarkerMissing ||
                                 e.code() == ErrorCode::RuleCountMismatch;
        if (run.strict || !recoverable) throw;
        errors[i] = std::string(to_string(e.code())) + ": " + e.detail();
      }
    });
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      if (!gens[i]) {
        ++failed;
        run.manifest.skipped.push_back({{"line", chunk[i].first}, {"error", errors[i]}});
        continue;
      }
      if (gens[i]->warning) {
        ++warnings;
        run.err() << "warning: line " << chunk[i].first << ": " << *gens[i]->warning << '\n';
      }
      sink.write(eval::to_json(gens[i]->instance));
    }
  }
  run.record_skips(reader);
  run.manifest.input_counts = {{"attributes", read}};
  run.manifest.stages = {{"generation_failed", failed}, {"rule_count_warnings", warnings}};
  run.manifest.output_counts = {{"instances", sink.written()}};
}

// ------------------------------------------------------------------ eval-ifmt

void cmd_eval_ifmt(Run& run) {
  const auto& c = run.cfg.ifmt;
  run.connect(c.judge, "generator", "ifmt.judge");
  if (!c.metric.empty()) run.connect(c.metric, "metric", "ifmt.metric");
  InputSource in(run.opt().input);
  OutputSink sink(run.opt().output, run.out());
  JsonlReader reader(in.stream(), run.strict);
  using Item = std::pair<eval::IfMtInstance, std::string>;
  const std::function<Item(const Json&)> convert =
      guarded([](const Json& j) { return Item{eval::ifmt_instance_from_json(j), string_field(j, "translation")}; });
  eval::EvalReport report;
  report.system = run.cfg.eval.system;
  report.metric = "if_score";
  std::map<std::string, std::pair<double, std::size_t>> by_lang;
  std::size_t read = 0;
  for (;;) {
    auto chunk = reader.read_chunk<Item>(kChunk, convert);
    if (chunk.empty()) break;
    read += chunk.size();
    std::vector<eval::InstanceResult> results(chunk.size());
    parallel_for(chunk.size(), run.concurrency, [&](std::size_t i) {
      const auto& [inst, translation] = chunk[i].second;
      auto& r = results[i];
      r.id = inst.id;
      r.language = inst.target_language.code();
      try {
        r.if_score = eval::judge_ifmt(inst, translation, run.gw(), c.judge).score;
      } catch (const Error& e) {
        if (run.strict || e.code() != ErrorCode::ParseFailure) throw;
        r.error = "judge: " + e.detail();
      }
      if (!c.metric.empty()) {
        gateway::QualityRequest q{inst.prompt, translation, std::nullopt, run.cfg.endpoints.at(c.metric).metric_id};
        if (!inst.reference.empty()) q.reference_text = inst.reference;
        r.mt_score = run.gw().score_quality(c.metric, q);
      }
    });
    for (auto& r : results) {
      sink.write(eval::to_json(r));
      if (r.error.empty() && r.if_score) {
        auto& acc = by_lang[r.language];
        acc.first += *r.if_score;
        ++acc.second;
      }
      r.verdict.reset();
      report.per_instance.push_back(std::move(r));
    }
  }
  run.record_skips(reader);
  eval::compute_aggregates(report, run.cfg.eval.tie_credit);
  report.per_language = language_means(by_lang);
  write_report(run, report);
  run.manifest.input_counts = {{"instances", read}};
  run.manifest.stages = {{"judge_failed", report.excluded}};
  run.manifest.output_counts = {{"scored", sink.written()}};
}

// -------------------------------------------------------------- arena-winrate

void cmd_arena(Run& run) {
  const auto& judge = run.cfg.arena_judge;
  run.connect(judge, "generator", "arena.judge");
  InputSource in(run.opt().input);
  OutputSink sink(run.opt().output, run.out());
  JsonlReader reader(in.stream(), run.strict);
  const std::function<eval::ArenaItem(const Json&)> convert = guarded(eval::arena_item_from_json);
  eval::EvalReport report;
  report.system = run.cfg.eval.system;
  report.metric = "win_rate";
  std::map<std::string, std::vector<eval::Outcome>> by_lang;
  std::size_t read = 0;
  for (;;) {
    auto chunk = reader.read_chunk<eval::ArenaItem>(kChunk, convert);
    if (chunk.empty()) break;
    read += chunk.size();
    std::vector<eval::InstanceResult> results(chunk.size());
    parallel_for(chunk.size(), run.concurrency, [&](std::size_t i) {
      const auto& [line, item] = chunk[i];
      auto& r = results[i];
      r.id = item.id.empty() ? "line-" + std::to_string(line) : item.id;
      r.language = item.language;
      try {
        const auto j = eval::judge_arena(item, run.gw(), judge, mix_seed(run.seed, line));
        r.outcome = j.outcome;
        r.verdict = j.verdict;
      } catch (const Error& e) {
        if (run.strict || e.code() != ErrorCode::ParseFailure) throw;
        r.error = "judge: " + e.detail();
      }
    });
    for (auto& r : results) {
      sink.write(eval::to_json(r));
      if (r.error.empty() && r.outcome && !r.language.empty()) by_lang[r.language].push_back(*r.outcome);
      r.verdict.reset();
      report.per_instance.push_back(std::move(r));
    }
  }
  run.record_skips(reader);
  eval::compute_aggregates(report, run.cfg.eval.tie_credit);
  for (const auto& [lang, outcomes] : by_lang) {
    report.per_language.emplace_back(lang, 100.0 * eval::win_rate(outcomes, run.cfg.eval.tie_credit));
  }
  write_report(run, report);
  run.manifest.input_counts = {{"comparisons", read}};
  run.manifest.stages = {{"judge_failed", report.excluded}};
  run.manifest.output_counts = {{"judged", sink.written()}};
}

// ------------------------------------------------------------------- plumbing

int exit_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid:
      return kExitConfigInvalid;
    case ErrorCode::EndpointUnavailable:
      return kExitEndpointUnavailable;
    case ErrorCode::DataError:
      return kExitDataError;
    default:
      return kExitFailure;
  }
}

std::string manifest_path(const Options& opt) {
  if (!opt.manifest.empty()) return opt.manifest;
  if (!opt.output.empty() && opt.output != "-") return opt.output + ".manifest.json";
  return {};
}

int config_init(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto text = default_config_text(default_data_dir());
  if (opt.output.empty() || opt.output == "-") {
    out << text;
    return 0;
  }
  if (std::filesystem::exists(opt.output) && !opt.force) {
    err << "mtforge: " << opt.output << " exists; pass --force to overwrite\n";
    return kExitFailure;
  }
  std::ofstream f(opt.output, std::ios::binary);
  f << text;
  if (!f) {
    err << "mtforge: cannot write " << opt.output << '\n';
    return kExitFailure;
  }
  return 0;
}

int dispatch(const std::string& name, const Options& opt, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, void (*)(Run&)> kCommands = {
      {"corpus-prep", cmd_corpus_prep}, {"gen-verifiable", cmd_gen_verifiable}, {"curate-sft", cmd_curate_sft},
      {"build-prefs", cmd_build_prefs}, {"reward-batch", cmd_reward_batch},     {"eval-chrf", cmd_eval_chrf},
      {"gen-ifmt", cmd_gen_ifmt},       {"eval-ifmt", cmd_eval_ifmt},           {"arena-winrate", cmd_arena},
  };
  std::unique_ptr<Run> run;
  int status = 0;
  try {
    run = std::make_unique<Run>(name, opt, out, err);
    kCommands.at(name)(*run);
  } catch (const Error& e) {
    status = exit_status_for(e.code());
    err << "mtforge: " << to_string(e.code()) << ": " << e.detail() << '\n';
    if (run) run->manifest.error = std::string(to_string(e.code())) + ": " + e.detail();
  } catch (const std::exception& e) {
    status = kExitFailure;
    err << "mtforge: " << e.what() << '\n';
    if (run) run->manifest.error = e.what();
  }
  if (!run) return status;
  run->finish_endpoints();
  run->manifest.finished = utc_timestamp();
  run->manifest.exit_status = status;
  const auto path = manifest_path(opt);
  if (path.empty()) {
    err << "manifest: " << run->manifest.to_json().dump() << '\n';
  } else {
    std::ofstream(path) << run->manifest.to_json().dump(2) << '\n';
  }
  return status;
}

void add_io(CLI::App* sub, Options& o, bool needs_input = true) {
  sub->add_option("--config,-c", o.config, "YAML configuration file");
  if (needs_input) sub->add_option("--input,-i", o.input, "JSONL input (default stdin)");
  sub->add_option("--output,-o", o.output, "JSONL output (default stdout)");
  sub->add_option("--manifest", o.manifest, "manifest path (default <output>.manifest.json)");
  sub->add_flag("--offline", o.offline, "use the built-in deterministic mock endpoints");
  sub->add_flag("--strict", o.strict, "fail on the first malformed record");
  sub->add_option("--seed", o.seed, "run seed (overrides run.seed)");
  sub->add_option("--concurrency", o.concurrency, "worker threads (overrides run.concurrency)");
}

void add_report(CLI::App* sub, Options& o) {
  sub->add_option("--report", o.report, "report path prefix (default the output path)");
  sub->add_option("--layout", o.layout, "per-language or summary");
  sub->add_option("--groups", o.groups, "only these language groups");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data preparation, reward and evaluation pipelines for translation-centric LLMs", "mtforge"};
  app.require_subcommand(1);
  Options o;

  auto* config = app.add_subcommand("config", "configuration helpers");
  config->require_subcommand(1);
  auto* init = config->add_subcommand("init", "write the default configuration");
  init->add_option("--output,-o", o.output, "destination (default stdout)");
  init->add_flag("--force", o.force, "overwrite an existing file");

  add_io(app.add_subcommand("corpus-prep", "quality-gate parallel pairs and render them through templates"), o);
  auto* gen = app.add_subcommand("gen-verifiable", "generate guideline-verifiable translation samples");
  add_io(gen, o, false);
  gen->add_option("--count", o.count, "number of bundles (overrides gen_verifiable.count)");
  add_io(app.add_subcommand("curate-sft", "triage, filter and select SFT answers"), o);
  auto* prefs_cmd = app.add_subcommand("build-prefs", "build preference pairs");
  add_io(prefs_cmd, o);
  prefs_cmd->add_option("--mode", o.mode, "mbr, post_edit, annotation or reward");
  auto* reward = app.add_subcommand("reward-batch", "score model outputs with verifiable rewards");
  add_io(reward, o);
  reward->add_option("--samples", o.samples, "gen-verifiable output holding the reference samples");
  reward->add_option("--mode", o.mode, "strict or fractional");
  reward->add_flag("--serve", o.serve, "serve POST /reward instead of batch scoring");
  reward->add_option("--host", o.host, "listen address for --serve");
  reward->add_option("--port", o.port, "listen port for --serve");
  auto* chrf = app.add_subcommand("eval-chrf", "sentence and per-language chrF");
  add_io(chrf, o);
  add_report(chrf, o);
  add_io(app.add_subcommand("gen-ifmt", "generate IF-MT instances from attributes"), o);
  auto* eval_ifmt = app.add_subcommand("eval-ifmt", "judge IF-MT translations");
  add_io(eval_ifmt, o);
  add_report(eval_ifmt, o);
  auto* arena = app.add_subcommand("arena-winrate", "pairwise judge against a baseline");
  add_io(arena, o);
  add_report(arena, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // Prints help to `out` or the error to `err`.
    return app.exit(e, out, err) == 0 ? 0 : kExitUsage;
  }

  if (init->parsed()) {
    try {
      return config_init(o, out, err);
    } catch (const std::exception& e) {
      err << "mtforge: " << e.what() << '\n';
      return kExitFailure;
    }
  }
  for (auto* sub : app.get_subcommands()) return dispatch(sub->get_name(), o, out, err);
  return kExitUsage;
}

}  // namespace mtforge::cli
