#pragma once

#include <string>
#include <utility>
#include <vector>

#include "adgen/corpus.hpp"
#include "adgen/style.hpp"
#include "adgen/text.hpp"

namespace adgen::rewards {

// Scores one (content, headline) pair in [0, 1]. Implementations must be
// safe for concurrent read-only use.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(const std::string& content,
                       const std::string& headline) const = 0;
};

class ConstScorer final : public Scorer {
 public:
  explicit ConstScorer(double value) : value_(value) {}
  double score(const std::string&, const std::string&) const override {
    return value_;
  }

 private:
  double value_;
};

enum class QualityMode {
  threshold_proportion,  // share of headlines scoring >= the threshold
  mean_score,            // mean predicted score
};

struct RewardConfig {
  int target_count = 6;
  double faithfulness_threshold = 0.5;
  QualityMode quality_mode = QualityMode::threshold_proportion;
  text::BleuOptions bleu;  // max_n = 2, no smoothing by default
  style::StyleLexicon lexicon = style::default_lexicon();
};

// The five component rewards and their arithmetic mean, all in [0, 1].
struct RewardVector {
  double diversity = 0.0;
  double quality = 0.0;
  double ctr = 0.0;
  double quantity = 0.0;
  double format = 0.0;
  double composite = 0.0;
};

// 1 when raw_output parses as a JSON array of non-empty strings (the
// canonical emission schema), else 0. On failure the returned headlines
// come from a lenient fallback: one headline per non-empty trimmed line.
std::pair<double, std::vector<std::string>> format_reward(
    const std::string& raw_output);

// The canonical emission: a compact JSON array of the headlines. Always
// earns format reward 1.
std::string canonical_raw_output(const std::vector<std::string>& headlines);

// min(1, n/t); grows linearly and saturates at the target count.
double quantity_reward(long n, long t);

// (1 - PairBLEU + Coverage) / 2. For N = 1 PairBLEU is defined as 0 and
// coverage is computed normally; an empty set scores 0.
double diversity_reward(const std::vector<std::string>& headlines,
                        const RewardConfig& config);

double quality_reward(const std::vector<std::string>& headlines,
                      const std::string& content, const Scorer& scorer,
                      const RewardConfig& config);

// Mean scorer output across the set; empty set scores 0.
double ctr_reward(const std::vector<std::string>& headlines,
                  const std::string& content, const Scorer& scorer);

// Runs format_reward first, then the other four components on the parsed
// (or fallback) headline set. composite is the exact mean of the five.
RewardVector composite_reward(const std::string& content,
                              const std::string& raw_output,
                              const Scorer& quality_scorer,
                              const Scorer& ctr_scorer,
                              const RewardConfig& config);

// Composite rewards for a batch of (content, raw_output) pairs.
// OpenMP-parallel over sets; results are positionally stable.
std::vector<RewardVector> score_batch(
    const std::vector<std::pair<std::string, std::string>>& content_and_raw,
    const Scorer& quality_scorer, const Scorer& ctr_scorer,
    const RewardConfig& config);

}  // namespace adgen::rewards
