#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "adgen/corpus.hpp"
#include "adgen/rewards.hpp"
#include "adgen/style.hpp"

namespace adgen::grpo {

// One entry of the finite headline space the categorical policy ranges over.
struct Candidate {
  std::string headline;
  style::StyleType style;
  std::string keyword;
};

struct CandidateBank {
  std::vector<Candidate> candidates;

  // >= 2 candidates, distinct headlines.
  void validate() const;
  std::size_t size() const { return candidates.size(); }
};

// Trainable logits plus a frozen reference copy the KL penalty anchors to.
struct PolicyParams {
  std::vector<double> logits;
  std::vector<double> reference_logits;
};

// Zero logits with the reference frozen at the same point.
PolicyParams make_policy(std::size_t bank_size);

struct GrpoConfig {
  int group_size = 8;   // G sampled sets per update
  int set_size = 6;     // N headlines per set
  double beta = 0.01;   // KL penalty strength
  double learning_rate = 0.5;
  int steps = 100;
  std::uint64_t seed = 0;
  double advantage_epsilon = 1e-8;

  void validate() const;
};

std::vector<double> softmax(std::span<const double> logits);
std::vector<double> log_softmax(std::span<const double> logits);

struct SampledSet {
  std::vector<int> choices;  // bank indices, in draw order
  double log_prob = 0.0;     // sum of per-draw log softmax probabilities
  corpus::HeadlineSet set;   // raw_output is the canonical JSON array
};

// n independent draws from softmax(logits), with replacement. The inverse-
// CDF draw uses raw 53-bit uniforms, so results depend only on the rng
// stream.
SampledSet sample_set(const PolicyParams& policy, const CandidateBank& bank,
                      int n, std::mt19937_64& rng);

// Exact categorical KL(softmax(logits) || softmax(reference_logits)),
// per draw.
double kl_divergence(const PolicyParams& policy);

// Group-normalized advantages (r - mean) / (population std + epsilon);
// all-equal rewards give all-zero advantages.
std::vector<double> group_advantages(std::span<const double> group_rewards,
                                     double epsilon = 1e-8);

// -(1/G) sum_g A_g * log_prob(Y_g) + beta * N * KL. Minimizing this equals
// maximizing the expected set reward under the KL penalty on-policy.
double surrogate_loss(const PolicyParams& policy,
                      std::span<const SampledSet> sets,
                      std::span<const double> advantages, double beta);

// Analytic gradient of surrogate_loss with respect to the logits.
void surrogate_loss_grad(const PolicyParams& policy,
                         std::span<const SampledSet> sets,
                         std::span<const double> advantages, double beta,
                         double* loss, std::vector<double>* grad);

// Scores one sampled emission.
using RewardFn = std::function<rewards::RewardVector(
    const std::string& content, const std::string& raw_output)>;

// Scalar training objective extracted from a reward vector; defaults to
// the composite. Component-ablation experiments swap this out.
using Objective = std::function<double(const rewards::RewardVector&)>;

Objective composite_objective();

struct StepStats {
  rewards::RewardVector reward_means;  // averaged over the group
  double objective_mean = 0.0;
  double kl = 0.0;
  double grad_norm = 0.0;
};

// One update: sample G sets, score them (group members are scored
// concurrently and reassembled in sampling order), normalize advantages,
// take one gradient step on the surrogate.
StepStats grpo_step(PolicyParams& policy, const std::string& content,
                    const CandidateBank& bank, const RewardFn& reward_fn,
                    const GrpoConfig& config, std::mt19937_64& rng,
                    const Objective& objective = composite_objective());

struct TrainTrace {
  std::vector<StepStats> steps;
};

// Cycles contents round-robin, one grpo_step per training step.
// Fully determined by (contents, bank, config, reward_fn).
std::pair<PolicyParams, TrainTrace> train(
    const std::vector<std::string>& contents, const CandidateBank& bank,
    const RewardFn& reward_fn, const GrpoConfig& config,
    const Objective& objective = composite_objective());

// Policy file I/O (JSON; doubles round-trip bit-exactly).
void save_policy(const PolicyParams& policy, const std::filesystem::path& path);
PolicyParams load_policy(const std::filesystem::path& path);

void save_trace(const TrainTrace& trace, const std::filesystem::path& path);

// Bank file: JSONL {"headline", "style", "keyword"}.
CandidateBank load_bank(const std::filesystem::path& path);
void save_bank(const CandidateBank& bank, const std::filesystem::path& path);

}  // namespace adgen::grpo
