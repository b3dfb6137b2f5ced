#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace adgen::text {

using TokenSeq = std::vector<std::string>;

// Tokenization rules, applied to possibly malformed UTF-8:
//   - every CJK codepoint is its own token;
//   - maximal runs of ASCII letters/digits form one case-folded token;
//   - every emoji codepoint is its own token;
//   - everything else (punctuation, whitespace, malformed bytes) is dropped.
TokenSeq tokenize(std::string_view s);

std::vector<TokenSeq> tokenize_all(const std::vector<std::string>& texts);

// N-gram multiset over one sequence. Keys are tokens joined with 0x1F,
// which cannot occur inside a token.
struct NGramCounts {
  int n = 1;
  std::unordered_map<std::string, long> counts;
};

NGramCounts ngram_counts(const TokenSeq& seq, int n);

inline long ngram_total(const TokenSeq& seq, int n) {
  const long t = static_cast<long>(seq.size()) - n + 1;
  return t > 0 ? t : 0;
}

struct BleuOptions {
  int max_n = 2;      // headline-length texts; configurable 1..4
  bool smooth = false;  // opt-in add-one smoothing for orders >= 2
};

// Sentence BLEU: geometric mean of modified n-gram precisions for
// n = 1..max_n times the brevity penalty exp(min(0, 1 - r/c)), with r the
// closest reference length (ties toward the shorter reference). Orders the
// candidate is too short to support are dropped from the mean, so
// bleu(x, {x}) = 1 for any non-empty x. Without smoothing, any zero
// precision makes the score exactly 0; an empty candidate scores 0.
double bleu(const TokenSeq& candidate, const std::vector<TokenSeq>& references,
            const BleuOptions& opts = {});

// Mean sentence BLEU over all N*(N-1) ordered pairs of the set.
// Requires N >= 2. OpenMP-parallel; reduction order is fixed, so results
// are bit-identical across thread counts.
double pair_bleu(const std::vector<TokenSeq>& set, const BleuOptions& opts = {});

// Mean over i of bleu(set[i], set \ {set[i]}), all remaining sequences
// acting jointly as references. Requires N >= 2. OpenMP-parallel.
double self_bleu(const std::vector<TokenSeq>& set, const BleuOptions& opts = {});

// Unique n-grams across the set divided by total n-gram count across the
// set (n-grams never cross headline boundaries). Errors when the set has
// no n-grams of order n.
double distinct_n(const std::vector<TokenSeq>& set, int n);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Clipped n-gram overlap. Both scores are 0 when either side lacks
// n-grams; F1 is 0 when precision + recall is 0.
RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n);

// Longest-common-subsequence variant, LCS computed by dynamic programming.
RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference);

}  // namespace adgen::text
