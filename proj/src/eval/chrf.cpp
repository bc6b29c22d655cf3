#include "mtforge/eval/chrf.hpp"

#include <algorithm>
#include <unordered_map>

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::eval {
namespace {

// Matches Python's str.isspace, the usual reference behaviour for stripping.
bool is_space(char32_t c) {
  return c == U' ' || (c >= 0x09 && c <= 0x0D) || (c >= 0x1C && c <= 0x1F) || c == 0x85 || c == 0xA0 ||
         c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

std::u32string prepare(std::string_view s, bool strip) {
  const auto cps = utf8_decode(s);
  std::u32string out;
  out.reserve(cps.size());
  for (const auto c : cps) {
    if (strip && is_space(c)) continue;
    out.push_back(c);
  }
  return out;
}

std::unordered_map<std::u32string_view, std::uint64_t> ngram_counts(std::u32string_view s, std::size_t n) {
  std::unordered_map<std::u32string_view, std::uint64_t> counts;
  if (s.size() < n) return counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i) ++counts[s.substr(i, n)];
  return counts;
}

}  // namespace

void ChrfParams::validate() const {
  require(max_char_ngram >= 1, ErrorCode::InvalidArgument, "max_char_ngram must be >= 1");
  require(beta > 0, ErrorCode::InvalidArgument, "beta must be > 0");
}

ChrfStats& ChrfStats::operator+=(const ChrfStats& other) {
  require(other.hyp.size() == hyp.size(), ErrorCode::InvalidArgument, "chrF stats of different orders");
  for (std::size_t n = 0; n < hyp.size(); ++n) {
    hyp[n] += other.hyp[n];
    ref[n] += other.ref[n];
    matched[n] += other.matched[n];
  }
  return *this;
}

ChrfStats chrf_stats(std::string_view hypothesis, std::string_view reference, const ChrfParams& params) {
  params.validate();
  const auto h = prepare(hypothesis, params.whitespace_stripped);
  const auto r = prepare(reference, params.whitespace_stripped);
  ChrfStats stats(params.max_char_ngram);
  for (int n = 1; n <= params.max_char_ngram; ++n) {
    const auto idx = static_cast<std::size_t>(n - 1);
    const auto hc = ngram_counts(h, idx + 1);
    const auto rc = ngram_counts(r, idx + 1);
    stats.hyp[idx] = h.size() >= idx + 1 ? h.size() - idx : 0;
    stats.ref[idx] = r.size() >= idx + 1 ? r.size() - idx : 0;
    for (const auto& [gram, count] : hc) {
      if (const auto it = rc.find(gram); it != rc.end()) stats.matched[idx] += std::min(count, it->second);
    }
  }
  return stats;
}

double chrf_score(const ChrfStats& stats, const ChrfParams& params) {
  params.validate();
  const double b2 = params.beta * params.beta;
  double total = 0.0;
  int orders = 0;
  for (std::size_t n = 0; n < stats.hyp.size(); ++n) {
    if (stats.hyp[n] == 0 && stats.ref[n] == 0) continue;
    ++orders;
    const double p = stats.hyp[n] ? static_cast<double>(stats.matched[n]) / static_cast<double>(stats.hyp[n]) : 0.0;
    const double r = stats.ref[n] ? static_cast<double>(stats.matched[n]) / static_cast<double>(stats.ref[n]) : 0.0;
    if (p > 0 || r > 0) total += (1 + b2) * p * r / (b2 * p + r);
  }
  return orders == 0 ? 100.0 : 100.0 * total / orders;
}

double chrf(std::string_view hypothesis, std::string_view reference, const ChrfParams& params) {
  return chrf_score(chrf_stats(hypothesis, reference, params), params);
}

double corpus_chrf(const std::vector<std::pair<std::string, std::string>>& pairs, const ChrfParams& params) {
  require(!pairs.empty(), ErrorCode::EmptyCorpus, "corpus_chrf needs at least one pair");
  ChrfStats pooled(params.max_char_ngram);
  for (const auto& [h, r] : pairs) pooled += chrf_stats(h, r, params);
  return chrf_score(pooled, params);
}

}  // namespace mtforge::eval
