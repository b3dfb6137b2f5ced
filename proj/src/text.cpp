#include "adgen/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "adgen/parallel.hpp"
#include "adgen/unicode.hpp"

namespace adgen::text {

TokenSeq tokenize(std::string_view s) {
  TokenSeq out;
  std::string run;  // pending ASCII alnum run
  const auto flush = [&] {
    if (!run.empty()) {
      out.push_back(run);
      run.clear();
    }
  };
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t cp = uni::decode_at(s, i);
    if (cp == uni::kInvalid) {
      flush();
      continue;
    }
    if (uni::is_ascii_alnum(cp)) {
      run.push_back(static_cast<char>(uni::ascii_lower(cp)));
      continue;
    }
    flush();
    if (uni::is_cjk(cp) || uni::is_emoji(cp)) {
      std::string tok;
      uni::append_utf8(tok, cp);
      out.push_back(std::move(tok));
    }
  }
  flush();
  return out;
}

std::vector<TokenSeq> tokenize_all(const std::vector<std::string>& texts) {
  std::vector<TokenSeq> out(texts.size());
  par::for_index(static_cast<long>(texts.size()), 64, [&](long i) {
    out[static_cast<std::size_t>(i)] = tokenize(texts[static_cast<std::size_t>(i)]);
  });
  return out;
}

namespace {

constexpr char kSep = '\x1F';

std::string ngram_key(const TokenSeq& seq, std::size_t pos, int n) {
  std::string key = seq[pos];
  for (int k = 1; k < n; ++k) {
    key.push_back(kSep);
    key.append(seq[pos + k]);
  }
  return key;
}

// Modified precision for one order: candidate n-gram counts clipped by the
// maximum count in any reference.
void clipped_matches(const TokenSeq& candidate,
                     const std::vector<const TokenSeq*>& references, int n,
                     long* matches, long* total) {
  *total = ngram_total(candidate, n);
  *matches = 0;
  if (*total == 0) return;
  NGramCounts cand = ngram_counts(candidate, n);
  std::vector<NGramCounts> refs;
  refs.reserve(references.size());
  for (const auto* r : references) refs.push_back(ngram_counts(*r, n));
  for (const auto& [gram, cnt] : cand.counts) {
    long best = 0;
    for (const auto& rc : refs) {
      const auto it = rc.counts.find(gram);
      if (it != rc.counts.end()) best = std::max(best, it->second);
    }
    *matches += std::min(cnt, best);
  }
}

double bleu_impl(const TokenSeq& candidate,
                 const std::vector<const TokenSeq*>& references,
                 const BleuOptions& opts) {
  if (references.empty())
    throw std::invalid_argument("bleu: at least one reference is required");
  if (opts.max_n < 1) throw std::invalid_argument("bleu: max_n must be >= 1");
  const long c = static_cast<long>(candidate.size());
  if (c == 0) return 0.0;

  // Closest reference length; ties go to the shorter reference.
  long r = static_cast<long>(references.front()->size());
  for (const auto* ref : references) {
    const long len = static_cast<long>(ref->size());
    if (std::labs(len - c) < std::labs(r - c) ||
        (std::labs(len - c) == std::labs(r - c) && len < r)) {
      r = len;
    }
  }

  double log_prec_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= opts.max_n; ++n) {
    long matches = 0, total = 0;
    clipped_matches(candidate, references, n, &matches, &total);
    if (total == 0) break;  // candidate too short for this and higher orders
    double p;
    if (matches == 0) {
      if (!opts.smooth || n == 1) return 0.0;
      p = 1.0 / static_cast<double>(total + 1);
    } else {
      p = (opts.smooth && n >= 2)
              ? static_cast<double>(matches + 1) / static_cast<double>(total + 1)
              : static_cast<double>(matches) / static_cast<double>(total);
    }
    log_prec_sum += std::log(p);
    ++orders;
  }
  if (orders == 0) return 0.0;

  const double bp = c < r ? std::exp(1.0 - static_cast<double>(r) / c) : 1.0;
  return bp * std::exp(log_prec_sum / orders);
}

}  // namespace

NGramCounts ngram_counts(const TokenSeq& seq, int n) {
  if (n < 1) throw std::invalid_argument("ngram_counts: n must be >= 1");
  NGramCounts out;
  out.n = n;
  const long total = ngram_total(seq, n);
  out.counts.reserve(static_cast<std::size_t>(total));
  for (long i = 0; i < total; ++i) {
    ++out.counts[ngram_key(seq, static_cast<std::size_t>(i), n)];
  }
  return out;
}

double bleu(const TokenSeq& candidate, const std::vector<TokenSeq>& references,
            const BleuOptions& opts) {
  std::vector<const TokenSeq*> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(&r);
  return bleu_impl(candidate, refs, opts);
}

double pair_bleu(const std::vector<TokenSeq>& set, const BleuOptions& opts) {
  const long n = static_cast<long>(set.size());
  if (n < 2)
    throw std::invalid_argument("pair_bleu: need at least 2 headlines");
  std::vector<double> scores(static_cast<std::size_t>(n) * n, 0.0);
  par::for_index(n * n, 256, [&](long k) {
    const long i = k / n, j = k % n;
    if (i == j) return;
    scores[static_cast<std::size_t>(k)] = bleu_impl(
        set[static_cast<std::size_t>(i)], {&set[static_cast<std::size_t>(j)]},
        opts);
  });
  double sum = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (i != j) sum += scores[static_cast<std::size_t>(i) * n + j];
  return sum / (static_cast<double>(n) * (n - 1));
}

double self_bleu(const std::vector<TokenSeq>& set, const BleuOptions& opts) {
  const long n = static_cast<long>(set.size());
  if (n < 2)
    throw std::invalid_argument("self_bleu: need at least 2 headlines");
  std::vector<double> scores(static_cast<std::size_t>(n), 0.0);
  par::for_index(n, 16, [&](long i) {
    std::vector<const TokenSeq*> refs;
    refs.reserve(static_cast<std::size_t>(n) - 1);
    for (long j = 0; j < n; ++j)
      if (j != i) refs.push_back(&set[static_cast<std::size_t>(j)]);
    scores[static_cast<std::size_t>(i)] =
        bleu_impl(set[static_cast<std::size_t>(i)], refs, opts);
  });
  double sum = 0.0;
  for (double v : scores) sum += v;
  return sum / static_cast<double>(n);
}

double distinct_n(const std::vector<TokenSeq>& set, int n) {
  if (n < 1) throw std::invalid_argument("distinct_n: n must be >= 1");
  long total = 0;
  std::unordered_set<std::string> unique;
  for (const auto& seq : set) {
    const long t = ngram_total(seq, n);
    total += t;
    for (long i = 0; i < t; ++i)
      unique.insert(ngram_key(seq, static_cast<std::size_t>(i), n));
  }
  if (total == 0)
    throw std::invalid_argument("distinct_n: no n-grams of the given order");
  return static_cast<double>(unique.size()) / static_cast<double>(total);
}

namespace {

RougeScore rouge_from_counts(long match, long cand_total, long ref_total) {
  RougeScore s;
  if (cand_total > 0) s.precision = static_cast<double>(match) / cand_total;
  if (ref_total > 0) s.recall = static_cast<double>(match) / ref_total;
  if (s.precision + s.recall > 0.0)
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

}  // namespace

RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n) {
  if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
  const long ct = ngram_total(candidate, n);
  const long rt = ngram_total(reference, n);
  if (ct == 0 || rt == 0) return {};
  const NGramCounts cc = ngram_counts(candidate, n);
  const NGramCounts rc = ngram_counts(reference, n);
  long match = 0;
  for (const auto& [gram, cnt] : cc.counts) {
    const auto it = rc.counts.find(gram);
    if (it != rc.counts.end()) match += std::min(cnt, it->second);
  }
  return rouge_from_counts(match, ct, rt);
}

RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference) {
  const std::size_t m = candidate.size();
  const std::size_t n = reference.size();
  if (m == 0 || n == 0) return {};
  // Two-row LCS table.
  std::vector<long> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      cur[j] = candidate[i - 1] == reference[j - 1]
                   ? prev[j - 1] + 1
                   : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return rouge_from_counts(prev[n], static_cast<long>(m), static_cast<long>(n));
}

}  // namespace adgen::text
