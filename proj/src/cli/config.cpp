#include "mtforge/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::cli {
namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  fail(ErrorCode::ConfigInvalid, where + ": " + what);
}

void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node) return;
  if (!node.IsMap()) invalid(where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) invalid(where, "unknown key '" + key + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& where) {
  const auto v = node[key];
  if (!v || v.IsNull()) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    invalid(where + "." + key, "wrong type");
  }
}

void read_opt_double(const YAML::Node& node, const char* key, std::optional<double>& out, const std::string& where) {
  const auto v = node[key];
  if (!v || v.IsNull()) return;
  double d = 0;
  read(node, key, d, where);
  out = d;
}

void read_list(const YAML::Node& node, const char* key, std::vector<std::string>& out, const std::string& where) {
  const auto v = node[key];
  if (!v || v.IsNull()) return;
  if (!v.IsSequence()) invalid(where + "." + key, "expected a list");
  out.clear();
  for (const auto& item : v) {
    try {
      out.push_back(item.as<std::string>());
    } catch (const YAML::Exception&) {
      invalid(where + "." + key, "expected a list of strings");
    }
  }
}

EndpointSpec parse_endpoint(const std::string& id, const YAML::Node& n) {
  const auto where = "endpoints." + id;
  check_keys(n, where,
             {"base_url", "kind", "metric_id", "direction", "auth_token_env_var", "timeout_ms", "max_retries",
              "requests_per_minute", "cache_dir", "cache", "max_concurrency", "retry_backoff_ms"});
  EndpointSpec e;
  e.config.endpoint_id = id;
  read(n, "base_url", e.config.base_url, where);
  read(n, "kind", e.kind, where);
  if (e.kind != "generator" && e.kind != "metric" && e.kind != "reward") {
    invalid(where + ".kind", "must be generator, metric or reward");
  }
  read(n, "metric_id", e.metric_id, where);
  std::string direction = "higher_better";
  read(n, "direction", direction, where);
  try {
    e.direction = parse_direction(direction);
  } catch (const Error& err) {
    invalid(where + ".direction", err.detail());
  }
  if (e.kind == "metric" && e.metric_id.empty()) invalid(where, "metric endpoints need metric_id");
  read(n, "auth_token_env_var", e.config.auth_token_env_var, where);
  long long ms = e.config.timeout.count();
  read(n, "timeout_ms", ms, where);
  e.config.timeout = std::chrono::milliseconds(ms);
  read(n, "max_retries", e.config.max_retries, where);
  read(n, "requests_per_minute", e.config.requests_per_minute, where);
  std::string cache_dir;
  read(n, "cache_dir", cache_dir, where);
  if (!cache_dir.empty()) e.config.cache_dir = cache_dir;
  read(n, "cache", e.config.cache_enabled, where);
  read(n, "max_concurrency", e.config.max_concurrency, where);
  long long backoff = e.config.retry_backoff.count();
  read(n, "retry_backoff_ms", backoff, where);
  e.config.retry_backoff = std::chrono::milliseconds(backoff);
  if (ms <= 0 || e.config.max_retries < 0 || e.config.requests_per_minute <= 0 || e.config.max_concurrency <= 0) {
    invalid(where, "timeouts, rates and concurrency must be positive");
  }
  return e;
}

}  // namespace

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("MTFORGE_DATA_DIR"); env && *env) return env;
  return MTFORGE_DEFAULT_DATA_DIR;
}

std::filesystem::path Config::resolve(const std::string& p) const {
  std::filesystem::path fp(p);
  if (fp.is_absolute() || path.empty()) return fp;
  return path.parent_path() / fp;
}

const EndpointSpec& Config::endpoint(const std::string& id, std::string_view kind, std::string_view what) const {
  if (id.empty()) fail(ErrorCode::ConfigInvalid, std::string(what) + " is not set");
  const auto it = endpoints.find(id);
  if (it == endpoints.end()) fail(ErrorCode::ConfigInvalid, std::string(what) + " names unknown endpoint '" + id + "'");
  if (!kind.empty() && it->second.kind != kind) {
    fail(ErrorCode::ConfigInvalid, std::string(what) + " needs a " + std::string(kind) + " endpoint, '" + id +
                                       "' is " + it->second.kind);
  }
  return it->second;
}

Config parse_config(const std::string& yaml_text, const std::filesystem::path& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    fail(ErrorCode::ConfigInvalid, std::string("YAML: ") + e.what());
  }
  Config c;
  c.path = origin;
  c.digest = sha256_hex(yaml_text);
  if (!root || root.IsNull()) return c;
  check_keys(root, "config",
             {"run", "endpoints", "corpus_prep", "gen_verifiable", "curate_sft", "build_prefs", "reward_batch", "eval",
              "ifmt", "arena"});

  const auto run = root["run"];
  check_keys(run, "run", {"seed", "concurrency", "strict"});
  if (run) {
    read(run, "seed", c.seed, "run");
    read(run, "concurrency", c.concurrency, "run");
    read(run, "strict", c.strict, "run");
  }
  if (c.concurrency == 0) invalid("run.concurrency", "must be >= 1");

  if (const auto eps = root["endpoints"]; eps && !eps.IsNull()) {
    if (!eps.IsMap()) invalid("endpoints", "expected a mapping");
    for (const auto& kv : eps) {
      const auto id = kv.first.as<std::string>();
      c.endpoints.emplace(id, parse_endpoint(id, kv.second));
    }
  }

  if (const auto n = root["corpus_prep"]) {
    auto& s = c.corpus_prep;
    const std::string w = "corpus_prep";
    check_keys(n, w, {"quality_endpoint", "quality_threshold", "templates_dir", "template", "lenient", "tokens_per_word",
                      "mixture_total_tokens", "available_monolingual_tokens", "available_instruction_tokens"});
    read(n, "quality_endpoint", s.quality_endpoint, w);
    read_opt_double(n, "quality_threshold", s.quality_threshold, w);
    read(n, "templates_dir", s.templates_dir, w);
    read(n, "template", s.template_id, w);
    read(n, "lenient", s.lenient, w);
    read(n, "tokens_per_word", s.tokens_per_word, w);
    if (n["mixture_total_tokens"] && !n["mixture_total_tokens"].IsNull()) {
      std::int64_t t = 0;
      read(n, "mixture_total_tokens", t, w);
      s.mixture_total_tokens = t;
    }
    read(n, "available_monolingual_tokens", s.available_monolingual, w);
    read(n, "available_instruction_tokens", s.available_instruction, w);
    if (s.tokens_per_word <= 0) invalid(w + ".tokens_per_word", "must be > 0");
  }

  if (const auto n = root["gen_verifiable"]) {
    auto& s = c.gen_verifiable;
    const std::string w = "gen_verifiable";
    check_keys(n, w, {"generator", "judge", "translator", "editor", "quality", "count", "quality_gate",
                      "generation_temperature", "source_language", "target_languages", "catalog_dir", "topics",
                      "strict_bundle_size"});
    read(n, "generator", s.generator, w);
    read(n, "judge", s.judge, w);
    read(n, "translator", s.translator, w);
    read(n, "editor", s.editor, w);
    read(n, "quality", s.quality, w);
    read(n, "count", s.count, w);
    read(n, "quality_gate", s.quality_gate, w);
    read(n, "generation_temperature", s.generation_temperature, w);
    read(n, "source_language", s.source_language, w);
    read_list(n, "target_languages", s.target_languages, w);
    read(n, "catalog_dir", s.catalog_dir, w);
    read(n, "topics", s.topics, w);
    read(n, "strict_bundle_size", s.strict_bundle_size, w);
    if (s.generation_temperature < 0) invalid(w + ".generation_temperature", "must be >= 0");
  }

  if (const auto n = root["curate_sft"]) {
    auto& s = c.curate_sft;
    const std::string w = "curate_sft";
    check_keys(n, w, {"judge", "reward", "teachers", "translation_judge", "keep_threshold", "allowlist"});
    read(n, "judge", s.judge, w);
    read(n, "reward", s.reward, w);
    read_list(n, "teachers", s.teachers, w);
    read(n, "translation_judge", s.translation_judge, w);
    read(n, "keep_threshold", s.keep_threshold, w);
    read_list(n, "allowlist", s.allowlist, w);
    if (s.keep_threshold < 1 || s.keep_threshold > 5) invalid(w + ".keep_threshold", "must be in 1..5");
  }

  if (const auto n = root["build_prefs"]) {
    auto& s = c.build_prefs;
    const std::string w = "build_prefs";
    check_keys(n, w, {"mode", "generator", "utility", "check_metric", "judge", "reward", "num_samples", "temperature"});
    read(n, "mode", s.mode, w);
    read(n, "generator", s.generator, w);
    read(n, "utility", s.utility, w);
    read(n, "check_metric", s.check_metric, w);
    read(n, "judge", s.judge, w);
    read(n, "reward", s.reward, w);
    read(n, "num_samples", s.num_samples, w);
    read(n, "temperature", s.temperature, w);
    static const std::set<std::string> kModes = {"mbr", "post_edit", "annotation", "reward"};
    if (!kModes.count(s.mode)) invalid(w + ".mode", "must be mbr, post_edit, annotation or reward");
    if (s.num_samples < 2) invalid(w + ".num_samples", "must be >= 2");
  }

  if (const auto n = root["reward_batch"]) {
    auto& s = c.reward_batch;
    const std::string w = "reward_batch";
    check_keys(n, w, {"mode", "samples", "host", "port"});
    read(n, "mode", s.mode, w);
    read(n, "samples", s.samples, w);
    read(n, "host", s.host, w);
    read(n, "port", s.port, w);
    if (s.mode != "strict" && s.mode != "fractional") invalid(w + ".mode", "must be strict or fractional");
  }

  if (const auto n = root["eval"]) {
    auto& s = c.eval;
    const std::string w = "eval";
    check_keys(n, w, {"chrf", "layout", "system", "language_groups", "tie_credit"});
    if (const auto ch = n["chrf"]) {
      check_keys(ch, w + ".chrf", {"max_char_ngram", "beta", "whitespace_stripped"});
      read(ch, "max_char_ngram", s.chrf.max_char_ngram, w + ".chrf");
      read(ch, "beta", s.chrf.beta, w + ".chrf");
      read(ch, "whitespace_stripped", s.chrf.whitespace_stripped, w + ".chrf");
      try {
        s.chrf.validate();
      } catch (const Error& e) {
        invalid(w + ".chrf", e.detail());
      }
    }
    read(n, "layout", s.layout, w);
    if (s.layout != "per-language" && s.layout != "summary") invalid(w + ".layout", "must be per-language or summary");
    read(n, "system", s.system, w);
    read(n, "tie_credit", s.tie_credit, w);
    if (s.tie_credit < 0 || s.tie_credit > 1) invalid(w + ".tie_credit", "must be in [0, 1]");
    if (const auto groups = n["language_groups"]; groups && !groups.IsNull()) {
      if (!groups.IsSequence()) invalid(w + ".language_groups", "expected a list");
      for (const auto& g : groups) {
        check_keys(g, w + ".language_groups[]", {"name", "languages"});
        eval::LanguageGroup lg;
        read(g, "name", lg.name, w + ".language_groups[]");
        read_list(g, "languages", lg.languages, w + ".language_groups[]");
        s.language_groups.push_back(std::move(lg));
      }
      eval::validate_groups(s.language_groups);
    }
  }

  if (const auto n = root["ifmt"]) {
    auto& s = c.ifmt;
    const std::string w = "ifmt";
    check_keys(n, w, {"generator", "temperature", "strict_rule_count", "judge", "metric"});
    read(n, "generator", s.generator, w);
    read(n, "temperature", s.temperature, w);
    read(n, "strict_rule_count", s.strict_rule_count, w);
    read(n, "judge", s.judge, w);
    read(n, "metric", s.metric, w);
  }

  if (const auto n = root["arena"]) {
    check_keys(n, "arena", {"judge"});
    read(n, "judge", c.arena_judge, "arena");
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ConfigInvalid, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string default_config_text(const std::filesystem::path& data_dir) {
  std::string t = R"Y(# mtforge configuration.
# Values marked "published" are the defaults reported for the original
# pipeline; everything else is a project choice you may tune.

run:
  seed: 0
  concurrency: 4
  strict: false          # abort on the first malformed record instead of skipping it

# Every model is an HTTP service. kind: generator | metric | reward.
# Auth tokens are read from the environment variable named in auth_token_env_var.
endpoints:
  llm:
    base_url: http://127.0.0.1:8000
    kind: generator
    auth_token_env_var: ""
    timeout_ms: 60000
    max_retries: 2
    requests_per_minute: 600
    max_concurrency: 4
  qe:
    base_url: http://127.0.0.1:8001
    kind: metric
    metric_id: cometkiwi   # published: reference-free quality estimation
    direction: higher_better
  comet:
    base_url: http://127.0.0.1:8002
    kind: metric
    metric_id: comet22     # published: MBR utility
    direction: higher_better
  metricx:
    base_url: http://127.0.0.1:8003
    kind: metric
    metric_id: metricx24   # published: second metric of the preference double check
    direction: lower_better
  rm:
    base_url: http://127.0.0.1:8004
    kind: reward

corpus_prep:
  quality_endpoint: qe
  quality_threshold: 0.75  # no published value; pick one for your QE model
  templates_dir: ""        # empty: the eight stock translation templates
  template: random         # or a template id
  lenient: false           # skip pairs whose score response is malformed
  tokens_per_word: 1.3
  # mixture_total_tokens: 1000000   # set to plan 66/33/1 budgets
  available_monolingual_tokens: 0
  available_instruction_tokens: 0

gen_verifiable:
  generator: llm
  judge: llm
  translator: llm
  editor: llm
  quality: qe
  count: 20
  quality_gate: 0.8              # published
  generation_temperature: 0.7
  source_language: en
  target_languages: [de_DE, es_MX, fr_FR, it_IT, pt_BR, ru_RU, zh_CN]
  catalog_dir: @DATA@/guidelines
  topics: @DATA@/topics.tsv
  strict_bundle_size: false

curate_sft:
  judge: llm
  reward: rm
  teachers: [llm]
  translation_judge: ""          # set to score Translation records 1-5
  keep_threshold: 4              # published: keep when reasoning and readability are both >= 4
  allowlist: [OpenHermes-2.5]    # published: kept regardless of scores

build_prefs:
  mode: mbr                      # mbr | post_edit | annotation | reward
  generator: llm
  utility: comet
  check_metric: metricx
  judge: llm
  reward: rm
  num_samples: 24                # published
  temperature: 1.0               # published

reward_batch:
  mode: strict                   # strict | fractional
  samples: ""                    # gen-verifiable output to score against
  host: 127.0.0.1
  port: 8090

eval:
  chrf:
    max_char_ngram: 6
    beta: 2.0
    whitespace_stripped: true
  layout: per-language           # per-language | summary
  system: system
  tie_credit: 0.5
  # Cumulative: each group also averages the languages of the groups above it.
  language_groups:
)Y";
  for (const auto& g : eval::default_language_groups()) {
    t += "    - name: " + g.name + "\n      languages: [";
    for (std::size_t i = 0; i < g.languages.size(); ++i) t += (i ? ", " : "") + g.languages[i];
    t += "]\n";
  }
  t += R"Y(
ifmt:
  generator: llm
  temperature: 0.7
  strict_rule_count: false
  judge: llm
  metric: ""                     # optional metric for the translation-quality axis

arena:
  judge: llm
)Y";
  return replace_all(t, "@DATA@", data_dir.string());
}

}  // namespace mtforge::cli
