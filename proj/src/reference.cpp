#include "adgen/reference.hpp"

#include <stdexcept>

namespace adgen::reference {

double pair_bleu(const std::vector<text::TokenSeq>& set,
                 const text::BleuOptions& opts) {
  const long n = static_cast<long>(set.size());
  if (n < 2)
    throw std::invalid_argument("pair_bleu: need at least 2 headlines");
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (i == j) continue;
      sum += text::bleu(set[static_cast<std::size_t>(i)],
                        {set[static_cast<std::size_t>(j)]}, opts);
    }
  }
  return sum / (static_cast<double>(n) * (n - 1));
}

double self_bleu(const std::vector<text::TokenSeq>& set,
                 const text::BleuOptions& opts) {
  const long n = static_cast<long>(set.size());
  if (n < 2)
    throw std::invalid_argument("self_bleu: need at least 2 headlines");
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    std::vector<text::TokenSeq> refs;
    refs.reserve(static_cast<std::size_t>(n) - 1);
    for (long j = 0; j < n; ++j)
      if (j != i) refs.push_back(set[static_cast<std::size_t>(j)]);
    sum += text::bleu(set[static_cast<std::size_t>(i)], refs, opts);
  }
  return sum / static_cast<double>(n);
}

double avg_pairwise_cosine(const std::vector<std::string>& texts,
                           const embedding::EmbeddingProvider& provider) {
  const long n = static_cast<long>(texts.size());
  if (n < 2)
    throw std::invalid_argument("avg_pairwise_cosine: need at least 2 texts");
  std::vector<embedding::EmbeddingVector> vecs;
  vecs.reserve(static_cast<std::size_t>(n));
  for (const auto& t : texts) vecs.push_back(provider.embed(t));
  double sum = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      sum += embedding::cosine(vecs[static_cast<std::size_t>(i)],
                               vecs[static_cast<std::size_t>(j)]);
  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  return 100.0 * sum / pairs;
}

std::vector<rewards::RewardVector> score_batch(
    const std::vector<std::pair<std::string, std::string>>& content_and_raw,
    const rewards::Scorer& quality_scorer, const rewards::Scorer& ctr_scorer,
    const rewards::RewardConfig& config) {
  std::vector<rewards::RewardVector> out;
  out.reserve(content_and_raw.size());
  for (const auto& [content, raw] : content_and_raw) {
    out.push_back(rewards::composite_reward(content, raw, quality_scorer,
                                            ctr_scorer, config));
  }
  return out;
}

}  // namespace adgen::reference
