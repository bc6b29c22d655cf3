#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mtforge::eval {

struct ChrfParams {
  int max_char_ngram = 6;
  double beta = 2.0;
  bool whitespace_stripped = true;

  void validate() const;  // InvalidArgument
};

// Per-order n-gram totals; pooled across pairs for corpus scores.
struct ChrfStats {
  std::vector<std::uint64_t> hyp, ref, matched;

  explicit ChrfStats(int max_n = 6) : hyp(max_n, 0), ref(max_n, 0), matched(max_n, 0) {}
  ChrfStats& operator+=(const ChrfStats& other);
};

// Character n-gram counts over code points. Invalid UTF-8 bytes count as U+FFFD.
ChrfStats chrf_stats(std::string_view hypothesis, std::string_view reference, const ChrfParams& params = {});

// 100 * mean over n of F_beta, skipping orders where neither side has n-grams.
// Nothing to compare at all (e.g. both empty) scores 100.
double chrf_score(const ChrfStats& stats, const ChrfParams& params = {});

double chrf(std::string_view hypothesis, std::string_view reference, const ChrfParams& params = {});

// Pools counts across pairs before computing F. EmptyCorpus on an empty list.
double corpus_chrf(const std::vector<std::pair<std::string, std::string>>& pairs, const ChrfParams& params = {});

}  // namespace mtforge::eval
