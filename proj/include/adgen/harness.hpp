#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adgen/corpus.hpp"
#include "adgen/embedding.hpp"
#include "adgen/style.hpp"
#include "adgen/text.hpp"

namespace adgen::harness {

// Aggregate metrics on a 0-100 scale. Metrics that cannot be computed for
// any set (say, pairwise scores when every set has one headline) are left
// empty with the reason recorded in `absent`. The conventions block makes
// two reports comparable only when they agree.
struct MetricReport {
  std::optional<double> pair_bleu;
  std::optional<double> self_bleu;
  std::optional<double> distinct_ngram;
  std::optional<double> cos_sim;
  std::optional<double> style_cov;          // pooled distinct styles / 16
  std::optional<double> style_cov_per_set;  // mean per-set coverage
  std::optional<double> nli;                // only with precomputed scores
  std::optional<double> rouge1;
  std::optional<double> rouge2;
  std::optional<double> rougeL;
  int set_count = 0;
  std::map<std::string, std::string> conventions;
  std::map<std::string, std::string> absent;  // metric -> reason
};

struct EvalConfig {
  text::BleuOptions bleu;
  style::StyleLexicon lexicon = style::default_lexicon();
  // Precomputed entailment scores keyed by (ad_id, headline); every
  // generated pair must be present when supplied.
  std::map<std::pair<std::string, std::string>, double> nli_scores;
  bool use_nli = false;
};

// Per-set diversity metrics averaged over sets; distinct n-grams pooled
// over every headline; ROUGE per (headline, reference title) pair averaged
// over all pairs; style coverage both per-set-averaged and pooled. Every
// set's ad_id must have a reference title.
MetricReport evaluate_sets(
    const std::vector<corpus::HeadlineSet>& generated,
    const std::vector<std::pair<std::string, std::string>>& references,
    const embedding::EmbeddingProvider& provider, const EvalConfig& config);

// Report file I/O and the aligned text table.
std::string report_to_json(const MetricReport& report);
MetricReport report_from_json(const std::string& json_text);
std::string report_table(const MetricReport& report);

struct MetricDelta {
  std::string metric;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> delta;     // b - a where both present
  std::string direction;           // "up", "down", "flat", or "absent"
};

// Per-metric signed deltas (b - a). Reports must carry identical
// conventions.
std::vector<MetricDelta> ablation_compare(const MetricReport& a,
                                          const MetricReport& b);

std::string delta_table(const std::vector<MetricDelta>& deltas);

struct UserProfile {
  std::string id;
  std::string text;  // may be empty when a precomputed vector is given
  std::optional<embedding::EmbeddingVector> vector;
};

struct Selection {
  std::string headline;
  double similarity = 0.0;
  int index = 0;
};

// Headline whose embedding is most cosine-similar to the profile; ties
// break toward the earliest headline.
Selection select_for_profile(const corpus::HeadlineSet& set,
                             const UserProfile& profile,
                             const embedding::EmbeddingProvider& provider);

}  // namespace adgen::harness
