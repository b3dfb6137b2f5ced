#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "adgen/corpus.hpp"
#include "adgen/rewards.hpp"

namespace adgen::models {

inline constexpr int kDefaultFeatureDim = 4096;
// Fixed hash seed; models record it so feature spaces stay reproducible.
inline constexpr std::uint64_t kFeatureHashSeed = 0x9E3779B97F4A7C15ULL;
inline constexpr int kFeatureSchemaVersion = 1;

struct FeatureVector {
  std::vector<double> values;

  int dim() const { return static_cast<int>(values.size()); }
};

// Unnormalized features: hashed headline token unigrams/bigrams, hashed
// content unigrams, and four scalar slots at the tail (headline token
// length, distinct-token overlap fraction with the content, emoji
// presence, question-mark presence).
FeatureVector raw_features(const std::string& content,
                           const std::string& headline,
                           int dim = kDefaultFeatureDim);

// raw_features scaled to unit L2 norm.
FeatureVector extract_features(const std::string& content,
                               const std::string& headline,
                               int dim = kDefaultFeatureDim);

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  int dim = 0;
  std::uint64_t hash_seed = kFeatureHashSeed;
  int schema_version = kFeatureSchemaVersion;
};

LinearModel zero_model(int dim = kDefaultFeatureDim);

// logistic(w . f + b), strictly inside (0, 1).
double predict(const LinearModel& model, const FeatureVector& features);

double predict(const LinearModel& model, const std::string& content,
               const std::string& headline);

// Bit-exact JSON round-trip (doubles survive via shortest-round-trip
// formatting).
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

struct TrainConfig {
  double learning_rate = 0.5;
  int epochs = 100;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double l2 = 0.0;
  double margin = 0.3;  // pairwise ranking margin
};

struct TrainResult {
  LinearModel model;
  std::vector<double> loss_trace;  // full-data loss at the end of each epoch
};

// ----- quality classifier (binary cross-entropy) -----

struct QualityExample {
  FeatureVector features;
  int label = 0;
};

std::vector<QualityExample> featurize_quality(
    const std::vector<corpus::LabeledQuality>& data, int dim = kDefaultFeatureDim);

// Mean BCE over the examples plus l2 * |w|^2.
double quality_loss(const LinearModel& model,
                    std::span<const QualityExample> examples, double l2);

// Analytic gradient of quality_loss; grad_bias gets d/d bias.
void quality_loss_grad(const LinearModel& model,
                       std::span<const QualityExample> examples, double l2,
                       std::vector<double>* grad_weights, double* grad_bias);

double accuracy(const LinearModel& model,
                std::span<const QualityExample> examples);

// Mini-batch gradient descent; requires both classes present.
// Deterministic given (data, config).
TrainResult train_quality(const std::vector<corpus::LabeledQuality>& data,
                          const TrainConfig& config,
                          int dim = kDefaultFeatureDim);

// ----- CTR ranking model (pairwise margin loss) -----

// (1/N) sum max(0, margin - pos[i] + neg[i]).
double margin_loss(std::span<const double> pos_scores,
                   std::span<const double> neg_scores, double margin);

struct PairExample {
  FeatureVector positive;
  FeatureVector negative;
};

std::vector<PairExample> featurize_pairs(const std::vector<corpus::CtrPair>& pairs,
                                         int dim = kDefaultFeatureDim);

// Mean hinge over pairs of predicted scores plus l2 * |w|^2.
double ctr_loss(const LinearModel& model, std::span<const PairExample> pairs,
                double margin, double l2);

void ctr_loss_grad(const LinearModel& model, std::span<const PairExample> pairs,
                   double margin, double l2, std::vector<double>* grad_weights,
                   double* grad_bias);

TrainResult train_ctr(const std::vector<corpus::CtrPair>& pairs,
                      const TrainConfig& config, int dim = kDefaultFeatureDim);

// ----- pair mining from interaction logs -----

struct MineResult {
  std::vector<corpus::CtrPair> pairs;
  int skipped_contents = 0;  // contents with fewer than 3 headlines
};

// Per content: rank headlines by clicks/impressions (ties by headline,
// ascending), cross-join the top third with the bottom third, discard the
// middle. Boundary pairs whose CTRs tie are dropped so every emitted pair
// has a strictly higher positive CTR.
MineResult mine_ctr_pairs(const std::vector<corpus::InteractionLog>& logs);

// ----- scorer adapters for the reward layer -----

class LinearModelScorer final : public rewards::Scorer {
 public:
  explicit LinearModelScorer(LinearModel model) : model_(std::move(model)) {}
  double score(const std::string& content,
               const std::string& headline) const override {
    return predict(model_, content, headline);
  }
  const LinearModel& model() const { return model_; }

 private:
  LinearModel model_;
};

// Frozen score table keyed by (content, headline) with a headline-only
// fallback, so external model outputs can be injected wherever a scorer is
// accepted. File format: JSONL {"headline": ..., "score": ...} with an
// optional "content" field; scores must lie in [0, 1].
class FrozenTableScorer final : public rewards::Scorer {
 public:
  static FrozenTableScorer load(const std::filesystem::path& path);

  double score(const std::string& content,
               const std::string& headline) const override;
  std::size_t size() const { return by_headline_.size() + by_pair_.size(); }

 private:
  std::unordered_map<std::string, double> by_pair_;  // content \x1F headline
  std::unordered_map<std::string, double> by_headline_;
};

}  // namespace adgen::models
