#pragma once

// Serial reference implementations of the OpenMP-parallel kernels. They
// accumulate in the same index order as the parallel versions, so tests
// can require bit-identical results, and the benchmark tool compares the
// two for speed.

#include <string>
#include <utility>
#include <vector>

#include "adgen/embedding.hpp"
#include "adgen/rewards.hpp"
#include "adgen/text.hpp"

namespace adgen::reference {

double pair_bleu(const std::vector<text::TokenSeq>& set,
                 const text::BleuOptions& opts = {});

double self_bleu(const std::vector<text::TokenSeq>& set,
                 const text::BleuOptions& opts = {});

double avg_pairwise_cosine(const std::vector<std::string>& texts,
                           const embedding::EmbeddingProvider& provider);

std::vector<rewards::RewardVector> score_batch(
    const std::vector<std::pair<std::string, std::string>>& content_and_raw,
    const rewards::Scorer& quality_scorer, const rewards::Scorer& ctr_scorer,
    const rewards::RewardConfig& config);

}  // namespace adgen::reference
